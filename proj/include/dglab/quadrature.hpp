#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <vector>

namespace dglab {

struct GaussRule {
  Eigen::VectorXd x;  // nodes on [-1, 1]
  Eigen::VectorXd w;
};

// Gauss-Legendre nodes by Newton iteration on P_n.
GaussRule gauss_legendre(int n);

// Map rule to [a, b] and integrate.
template <typename F>
double integrate(const GaussRule& g, double a, double b, F&& f) {
  double m = 0.5 * (a + b), h = 0.5 * (b - a), acc = 0.0;
  for (int i = 0; i < g.x.size(); ++i) acc += g.w(i) * f(m + h * g.x(i));
  return acc * h;
}

// Uniformly sampled table with 8-point Lagrange interpolation and even/flat extension rules.
class UniformTable {
 public:
  UniformTable() = default;
  UniformTable(double x0, double h, std::vector<double> values, bool even_at_x0)
      : x0_(x0), h_(h), v_(std::move(values)), even_(even_at_x0) {}
  double operator()(double x) const;
  double x0() const { return x0_; }
  double step() const { return h_; }
  double xmax() const { return x0_ + h_ * double(v_.size() - 1); }
  const std::vector<double>& values() const { return v_; }

 private:
  double at(long i) const;
  double x0_ = 0.0, h_ = 1.0;
  std::vector<double> v_;
  bool even_ = false;
};

// Composite rules on uniform samples (used as independent cross-checks).
double simpson(const std::vector<double>& y, double h);
double trapezoid(const std::vector<double>& y, double h);

}  // namespace dglab
