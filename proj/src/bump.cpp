#include "dglab/bump.hpp"

#include <cmath>
#include <complex>
#include <mutex>

#include "dglab/common.hpp"
#include "quadrature_impl.hpp"

namespace dglab {

namespace {

constexpr double kHx = 1.0 / 64.0;    // kappa_hat / F1 grid
constexpr double kHv = 1.0 / 4096.0;  // f_hat / H2 grid

double periodised_sum(const BumpProfile& b, double t, double theta) {
  double acc = b.f(t * theta);
  for (long n = 1;; ++n) {
    double a = t * (2.0 * kPi * n - theta), c = t * (2.0 * kPi * n + theta);
    if (a > b.table_extent()) break;
    acc += b.f(a) + b.f(c);
  }
  return acc;
}

}  // namespace

double BumpProfile::kappa(double u) {
  double q = 1.0 - 4.0 * u * u;
  return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
}

BumpProfile::BumpProfile(int quadrature_points) : nq_(quadrature_points) {
  if (nq_ < 1024) throw Error(ErrorKind::InvalidParameter, "bump quadrature needs >= 1024 points");
  rule_ = gauss_legendre(nq_);
  Eigen::VectorXd u(nq_), wk(nq_);
  for (int i = 0; i < nq_; ++i) {
    u(i) = 0.25 * (1.0 + rule_.x(i));  // [0, 1/2]
    wk(i) = 0.25 * rule_.w(i) * kappa(u(i));
  }

  // kappa_hat(x) = 2 int_0^{1/2} kappa(u) cos(xu) du on x = k hx, rotations reseeded every 64 steps.
  const long nx = long(std::llround(xmax_ / kHx)) + 1;
  std::vector<double> kh(nx, 0.0);
  for (int i = 0; i < nq_; ++i) {
    const std::complex<double> rot(std::cos(kHx * u(i)), std::sin(kHx * u(i)));
    std::complex<double> z(1.0, 0.0);
    for (long k = 0; k < nx; ++k) {
      if (k % 64 == 0) z = std::complex<double>(std::cos(k * kHx * u(i)), std::sin(k * kHx * u(i)));
      kh[k] += 2.0 * wk(i) * z.real();
      z *= rot;
    }
  }
  khat_ = UniformTable(0.0, kHx, kh, true);

  double k2 = 0.0, m2 = 0.0;
  for (int i = 0; i < nq_; ++i) {
    k2 += 2.0 * 0.25 * rule_.w(i) * kappa(u(i)) * kappa(u(i));
    m2 += 2.0 * wk(i) * u(i) * u(i);
  }

  // Cumulative int_0^x t kappa_hat(t)^2 dt, 8-point Gauss panels on the interpolant.
  GaussRule g8 = gauss_legendre(8);
  std::vector<double> cum(nx, 0.0);
  for (long k = 1; k < nx; ++k) {
    double a = (k - 1) * kHx, b = k * kHx;
    cum[k] = cum[k - 1] + integrate(g8, a, b, [&](double t) {
               double v = khat_(t);
               return t * v * v;
             });
  }
  const double total = cum.back();
  if (!std::isfinite(total) || total <= 0.0) throw Error(ErrorKind::ConstructionFailure, "normalisation integral");
  c_ = 1.0 / total;
  for (auto& v : cum) v *= c_;
  F1_ = UniformTable(0.0, kHx, cum, false);
  gamma_ = c_ * k2;
  f0_ = c_ * kh[0] * kh[0];
  f2_ = 2.0 * c_ * kh[0] * (-m2);

  // f_hat(v) = 2 pi c int kappa(w) kappa(v - w) dw over [v - 1/2, 1/2].
  GaussRule g200 = gauss_legendre(200);
  const long nv = long(std::llround(1.0 / kHv)) + 1;
  std::vector<double> fh(nv, 0.0);
  for (long k = 0; k < nv; ++k) {
    double v = k * kHv;
    if (v >= 1.0) break;
    fh[k] = 2.0 * kPi * c_ * integrate(g200, v - 0.5, 0.5, [&](double w) { return kappa(w) * kappa(v - w); });
  }
  fhat_ = UniformTable(0.0, kHv, fh, true);

  std::vector<double> h2(nv, 0.0);
  const double F0 = fh[0];
  for (long k = nv - 2; k >= 0; --k) {
    double a = k * kHv, b = (k + 1) * kHv;
    h2[k] = h2[k + 1] + integrate(g8, a, b, [&](double v) { return (fhat_(v) - F0) / (v * v); });
  }
  H2_ = UniformTable(0.0, kHv, h2, true);

  gamma_check_ = 0.5 * periodised_sum(*this, 0.5, std::acos(1.0 - 0.5));
  if (!(gamma_ > 0.0 && gamma_ < 1.0 / 3.0)) throw Error(ErrorKind::ConstructionFailure, "gamma outside (0, 1/3)");
}

double BumpProfile::kappa_hat_direct(double x) const {
  double acc = 0.0;
  for (int i = 0; i < nq_; ++i) {
    double u = 0.25 * (1.0 + rule_.x(i));
    acc += 0.5 * rule_.w(i) * kappa(u) * std::cos(x * u);
  }
  return acc;
}

double BumpProfile::kappa_hat(double x) const {
  x = std::abs(x);
  return x > xmax_ ? 0.0 : khat_(x);
}

double BumpProfile::f(double x) const {
  double k = kappa_hat(x);
  return c_ * k * k;
}

double BumpProfile::f_hat(double xi) const {
  xi = std::abs(xi);
  return xi >= 1.0 ? 0.0 : fhat_(xi);
}

double BumpProfile::F1(double y) const {
  y = std::abs(y);
  return y >= xmax_ ? 1.0 : F1_(y);
}

double BumpProfile::F1_over_y2(double y) const {
  y = std::abs(y);
  if (y < 1e-2) return 0.5 * f0_ + 0.125 * f2_ * y * y;
  return F1(y) / (y * y);
}

double BumpProfile::H(double y) const {
  if (y >= 1.0) return 0.0;
  if (y <= 0.0) throw Error(ErrorKind::DomainError, "H(y) needs y > 0");
  return fhat_(0.0) * (1.0 / y - 1.0) + H2_(y);
}

double BumpProfile::spectral_normalisation() const { return (fhat_(0.0) - H2_(0.0)) / kPi; }

double BumpProfile::P_t(double t, double lambda) const {
  if (!(lambda > 0.0 && lambda <= 3.0)) throw Error(ErrorKind::DomainError, "P_t needs lambda in (0, 3]");
  if (!(t > 0.0)) throw Error(ErrorKind::DomainError, "P_t needs t > 0");
  if (t <= 1.0) return gamma_ / t;
  return periodised_sum(*this, t, std::acos(1.0 - 0.5 * lambda));
}

double BumpProfile::P_t_chebyshev(double t, double lambda) const {
  if (!(lambda > 0.0 && lambda <= 3.0)) throw Error(ErrorKind::DomainError, "P_t needs lambda in (0, 3]");
  double theta = std::acos(1.0 - 0.5 * lambda), acc = f_hat(0.0);
  for (long k = 1; double(k) < t; ++k) acc += 2.0 * f_hat(k / t) * std::cos(k * theta);
  return acc / (2.0 * kPi * t);
}

std::shared_ptr<const BumpProfile> default_profile() {
  static std::once_flag once;
  static std::shared_ptr<const BumpProfile> p;
  std::call_once(once, [] { p = std::make_shared<const BumpProfile>(1024); });
  return p;
}

}  // namespace dglab
