#pragma once
// Included by bump.cpp only.
#include "dglab/quadrature.hpp"

namespace dglab {

GaussRule gauss_legendre(int n) {
  GaussRule g;
  g.x.resize(n);
  g.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5)), pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int k = 1; k <= n; ++k) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * k - 1.0) * z * p2 - (k - 1.0) * p3) / k;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    g.x(i) = -z;
    g.x(n - 1 - i) = z;
    g.w(i) = g.w(n - 1 - i) = 2.0 / ((1.0 - z * z) * pp * pp);
  }
  return g;
}

double UniformTable::at(long i) const {
  const long n = long(v_.size());
  if (i < 0) return even_ ? v_[std::min(-i, n - 1)] : v_[0];
  if (i >= n) return v_[n - 1];
  return v_[i];
}

double UniformTable::operator()(double x) const {
  double s = (x - x0_) / h_;
  long i0 = long(std::floor(s)) - 3;
  double r = s - double(i0);
  if (std::abs(r - std::round(r)) < 1e-15) return at(i0 + long(std::round(r)));
  double acc = 0.0;
  for (int j = 0; j < 8; ++j) {
    double lj = 1.0;
    for (int m = 0; m < 8; ++m)
      if (m != j) lj *= (r - m) / double(j - m);
    acc += lj * at(i0 + j);
  }
  return acc;
}

double simpson(const std::vector<double>& y, double h) {
  const std::size_t n = y.size();
  if (n < 3) return trapezoid(y, h);
  std::size_t m = (n - 1) % 2 == 0 ? n : n - 1;  // odd point count for Simpson
  double acc = y[0] + y[m - 1];
  for (std::size_t i = 1; i + 1 < m; ++i) acc += (i % 2 ? 4.0 : 2.0) * y[i];
  acc *= h / 3.0;
  if (m != n) acc += 0.5 * h * (y[n - 2] + y[n - 1]);
  return acc;
}

double trapezoid(const std::vector<double>& y, double h) {
  if (y.size() < 2) return 0.0;
  double acc = 0.5 * (y.front() + y.back());
  for (std::size_t i = 1; i + 1 < y.size(); ++i) acc += y[i];
  return acc * h;
}

}  // namespace dglab
