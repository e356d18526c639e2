#include "dglab/inequalities.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

namespace dglab {

Sides trace_sides(const Field& u, int k) {
  const long R = u.rows() - 2;
  if (R < 1 || u.cols() != u.rows()) throw Error(ErrorKind::InvalidParameter, "trace: field must be (R+2)x(R+2)");
  static const int mu[5][2] = {{0, 0}, {-1, 0}, {0, 1}, {1, 0}, {0, -1}};
  if (k < 1 || k > 4) throw Error(ErrorKind::InvalidParameter, "trace: k in 1..4");
  Sides s;
  for (long i = 1; i <= R; ++i) {
    double v = 0.0;
    switch (k) {
      case 1: v = u(0, i); break;
      case 2: v = u(i, R + 1); break;
      case 3: v = u(R + 1, i); break;
      default: v = u(i, 0); break;
    }
    s.lhs += v * v;
  }
  s.lhs /= double(R);
  for (long x = 1; x <= R; ++x)
    for (long y = 1; y <= R; ++y) {
      double a = u(x, y), b = u(x + mu[k][0], y + mu[k][1]);
      s.rhs += a * a + double(R) * std::abs(b * b - a * a);
    }
  s.rhs /= double(R) * R;
  return s;
}

Sides sobolev_sides(const Field& f) {
  const long R = f.rows() - 4;
  if (R < 1 || f.cols() != f.rows()) throw Error(ErrorKind::InvalidParameter, "sobolev: field must be (R+4)x(R+4)");
  const auto& e = unit_directions();
  double n0 = 0.0, n1 = 0.0, n2 = 0.0, sup = 0.0;
  for (long x = 2; x <= R + 1; ++x)
    for (long y = 2; y <= R + 1; ++y) {
      double f0 = f(x, y);
      sup = std::max(sup, f0 * f0);
      n0 += f0 * f0;
      for (const auto& a : e) {
        double f1 = f(x + a(0), y + a(1));
        n1 += (f1 - f0) * (f1 - f0);
        for (const auto& b : e) {
          double d = f(x + a(0) + b(0), y + a(1) + b(1)) - f1 - f(x + b(0), y + b(1)) + f0;
          n2 += d * d;
        }
      }
    }
  const double r2 = double(R) * R;
  return {sup, n0 / r2 + n1 + r2 * n2};
}

Sides quad_exp_sides(const Eigen::MatrixXd& C) {
  if (C.rows() != C.cols() || C.rows() == 0) throw Error(ErrorKind::InvalidParameter, "quad_exp: square matrix required");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (C + C.transpose()), Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  if (ev.maxCoeff() > 0.5 + 1e-12) throw Error(ErrorKind::PreconditionViolation, "largest eigenvalue exceeds 1/2");
  if (ev.minCoeff() < -1e-12) throw Error(ErrorKind::PreconditionViolation, "covariance not positive semidefinite");
  double logdet = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) logdet += std::log1p(-ev(i));
  return {std::exp(-0.5 * logdet), std::exp(C.trace())};
}

Field random_smooth_field(long n, double wavelength, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> freq(-3, 3);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * kPi);
  Field f = Field::Constant(n, n, 3.0 * g(rng));
  const int modes = 6;
  for (int m = 0; m < modes; ++m) {
    int a = freq(rng), b = freq(rng);
    double amp = g(rng) / (1.0 + a * a + b * b), phase = ph(rng);
    for (long x = 0; x < n; ++x)
      for (long y = 0; y < n; ++y) f(x, y) += amp * std::cos(2.0 * kPi * (a * x + b * y) / wavelength + phase);
  }
  return f;
}

Eigen::MatrixXd random_covariance(int n, double max_eig, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, max_eig);
  Eigen::MatrixXd A(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) A(i, k) = g(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  Eigen::MatrixXd Q = qr.householderQ();
  Eigen::VectorXd lam(n);
  for (int i = 0; i < n; ++i) lam(i) = u(rng);
  lam(0) = max_eig;  // saturate the precondition
  Eigen::MatrixXd C = Q * lam.asDiagonal() * Q.transpose();
  return 0.5 * (C + C.transpose());
}

InequalityFuzz fuzz_inequalities(const std::vector<int>& sizes, int fields, int covariances, std::uint64_t seed) {
  InequalityFuzz out;
  out.sizes = sizes;
  out.fields = fields;
  out.covariances = covariances;
  out.trace_ok = true;
  std::seed_seq sq{seed};
  std::vector<std::uint64_t> seeds(2);
  sq.generate(seeds.begin(), seeds.end());
  std::mt19937_64 rng(seeds[0]);
  for (int R : sizes) {
    double tmax = 0.0, smax = 0.0;
    for (int i = 0; i < fields; ++i) {
      Field f = random_smooth_field(R + 4, double(R), rng());
      Field u = f.block(1, 1, R + 2, R + 2);
      for (int k = 1; k <= 4; ++k) {
        Sides s = trace_sides(u, k);
        tmax = std::max(tmax, s.ratio());
        out.trace_ok = out.trace_ok && s.lhs <= s.rhs * (1.0 + 1e-12);
      }
      smax = std::max(smax, sobolev_sides(f).ratio());
    }
    // constants saturate the zeroth-order term (ratio exactly 1); include them so every size sees its extremal field
    smax = std::max(smax, sobolev_sides(Field::Constant(R + 4, R + 4, 1.0)).ratio());
    out.trace_max_ratio.push_back(tmax);
    out.sobolev_max_ratio.push_back(smax);
    out.sobolev_C = std::max(out.sobolev_C, smax);
  }
  // one constant for every size: the worst ratio must not grow with R
  out.sobolev_ok = std::isfinite(out.sobolev_C) && out.sobolev_C > 0.0;
  for (double r : out.sobolev_max_ratio) out.sobolev_ok = out.sobolev_ok && r <= 2.0 * out.sobolev_max_ratio.front();

  std::mt19937_64 crng(seeds[1]);
  std::uniform_int_distribution<int> dim(1, 24);
  out.quad_exp_ok = true;
  for (int i = 0; i < covariances; ++i) {
    Sides s = quad_exp_sides(random_covariance(dim(crng), 0.5, crng()));
    out.quad_exp_max_ratio = std::max(out.quad_exp_max_ratio, s.ratio());
    out.quad_exp_ok = out.quad_exp_ok && s.lhs <= s.rhs;
  }
  return out;
}

}  // namespace dglab
