#include "dglab/frd.hpp"

#include <unsupported/Eigen/FFT>
#include <cmath>
#include <complex>

namespace dglab {

namespace {

// 1/(4 sin^2(x/2)) - 1/x^2, regular at 0.
double reduced_image_sum(double x) {
  if (x < 1e-3) return 1.0 / 12.0 + x * x / 240.0;
  double s = std::sin(0.5 * x);
  return 1.0 / (4.0 * s * s) - 1.0 / (x * x);
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

FiniteRangeDecomposition::FiniteRangeDecomposition(std::shared_ptr<const BumpProfile> profile, StepDistribution J,
                                                   double s, double m2, FrdOptions opt)
    : profile_(std::move(profile)), J_(std::move(J)), s_(s), m2_(m2), opt_(opt) {
  if (!(m2_ >= 0.0 && m2_ <= 1.0)) throw Error(ErrorKind::InvalidParameter, "m2 must lie in [0, 1]");
  {
    double r = double(J_.rho) / opt_.cell_width;
    if (!(opt_.cell_width > 0.0) || std::abs(r - std::round(r)) > 1e-9 || std::round(r) < 1.0)
      throw Error(ErrorKind::InvalidParameter, "cell width must divide rho");
  }
  if (J_.theta <= 0.0) J_.theta = spectral_theta(J_);
  if (std::abs(s_) >= J_.theta)
    throw Error(ErrorKind::SeriesDivergence, "|s| >= theta_J: the series in s does not converge");
  if (s_ != 0.0) {
    double q = std::abs(s_) / J_.theta;
    l_max_ = 0;
    while (std::pow(q, 2.0 * l_max_) >= opt_.series_tol) ++l_max_;
  }
}

double FiniteRangeDecomposition::base_density(double t, double lamp) const {
  const double r = rho(), th = theta_of(lamp);
  double acc = profile_->f_hat(0.0);
  for (long k = 1; double(k) * r < t; ++k) acc += 2.0 * profile_->f_hat(k * r / t) * std::cos(k * th);
  return acc / (2.0 * kPi * r);
}

double FiniteRangeDecomposition::base_density_spatial(double t, double lamp) const {
  const double r = rho(), th = theta_of(lamp), X = profile_->table_extent();
  double acc = profile_->f(t * th / r);
  for (long n = 1;; ++n) {
    double a = t * (2.0 * kPi * n - th) / r;
    if (a > X) break;
    acc += profile_->f(a) + profile_->f(t * (2.0 * kPi * n + th) / r);
  }
  return t * acc / (r * r);
}

double FiniteRangeDecomposition::base_cumulative_spectral(double u, double lamp) const {
  const double r = rho(), th = theta_of(lamp);
  double acc = profile_->f_hat(0.0) * u;
  for (long k = 1; double(k) * r < u; ++k) acc += 2.0 * k * r * profile_->H(k * r / u) * std::cos(k * th);
  return acc / (2.0 * kPi * r);
}

double FiniteRangeDecomposition::base_cumulative_spatial(double u, double lamp) const {
  if (u <= 0.0) return 0.0;
  const double r = rho(), th = theta_of(lamp), X = profile_->table_extent();
  double acc = (u / r) * (u / r) * profile_->F1_over_y2(u * th / r) + reduced_image_sum(th);
  for (long n = 1;; ++n) {
    double cm = 2.0 * kPi * n - th, cp = 2.0 * kPi * n + th;
    if (u * cm / r > X) break;
    acc -= (1.0 - profile_->F1(u * cm / r)) / (cm * cm) + (1.0 - profile_->F1(u * cp / r)) / (cp * cp);
  }
  return acc;
}

double FiniteRangeDecomposition::base_window_spectral(double ta, double tb, double lamp) const {
  if (!(tb > ta)) return 0.0;
  if (std::isinf(tb)) throw Error(ErrorKind::DomainError, "spectral route needs a finite window");
  const double r = rho(), th = theta_of(lamp);
  double acc = profile_->f_hat(0.0) * (tb - ta);
  for (long k = 1; double(k) * r < tb; ++k) {
    double hb = profile_->H(k * r / tb), ha = double(k) * r < ta ? profile_->H(k * r / ta) : 0.0;
    acc += 2.0 * k * r * (hb - ha) * std::cos(k * th);
  }
  return acc / (2.0 * kPi * r);
}

double FiniteRangeDecomposition::base_window_spatial(double ta, double tb, double lamp) const {
  if (!(tb > ta)) return 0.0;
  if (ta < 1e-9) return base_cumulative_spatial(tb, lamp);
  const double r = rho(), th = theta_of(lamp), X = profile_->table_extent();
  const bool inf = std::isinf(tb);
  double acc;
  if (inf) {
    if (th == 0.0) return kInf;
    acc = (1.0 - profile_->F1(ta * th / r)) / (th * th);
  } else {
    acc = (tb / r) * (tb / r) * profile_->F1_over_y2(tb * th / r) - (ta / r) * (ta / r) * profile_->F1_over_y2(ta * th / r);
  }
  for (long n = 1;; ++n) {
    double cm = 2.0 * kPi * n - th, cp = 2.0 * kPi * n + th;
    if (ta * cm / r > X) break;
    for (double c : {cm, cp}) {
      double fb = inf ? 1.0 : profile_->F1(tb * c / r);
      acc += (fb - profile_->F1(ta * c / r)) / (c * c);
    }
  }
  return acc;
}

double FiniteRangeDecomposition::C_hat(double lam, double lamp) const {
  double c = C_hat_m2(lamp);
  if (!(c > 0.0)) throw Error(ErrorKind::InvalidParameter, "(lambda_J + m2)^-1 - gamma must be positive");
  return 1.0 / (1.0 / c + s_ * lam);
}

long FiniteRangeDecomposition::grid_points_for(double t_max) const {
  double T = std::max(0.0, (t_max - rho()) / 4.0);
  return long(std::ceil(T / h() - 1e-9)) + l_max_ + 3;
}

double FiniteRangeDecomposition::total_mass(double lam, double lamp) const {
  if (lamp == 0.0) return kInf;
  double A = base_window_spatial(rho(), kInf, lamp);
  if (!uses_series()) return A;
  double B = lamp * (gamma() + A) - s_ * lam * A;
  // truncated series, same order as the windows
  double q2 = (s_ * lam * A) * (s_ * lam * A), acc = 0.0, term = B * A;
  for (int l = 0; l <= l_max_; ++l, term *= q2) acc += term;
  return acc;
}

std::vector<double> FiniteRangeDecomposition::discrete_masses(double lam, double lamp,
                                                              const Eigen::Ref<const Eigen::VectorXd>& cum,
                                                              double* min_mass) const {
  const long M = long(cum.size()) - 1;
  const long m_rho = long(std::llround(rho() / h()));
  const std::size_t P = next_pow2(std::size_t(opt_.fft_oversample) * std::size_t(M + 1));
  const double log_r = std::log(1e-18) / double(P);

  // per-thread plan, damping and phase tables for the current length
  struct Cache {
    std::size_t P = 0;
    Eigen::FFT<double> fft;
    std::vector<double> damp, undamp, a, b, y;
    std::vector<std::complex<double>> phase, A, Bh, S;
  };
  thread_local Cache c;
  if (c.P != P) {
    c.P = P;
    c.fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
    c.damp.resize(P);
    c.undamp.resize(P);
    c.phase.resize(P);
    for (std::size_t n = 0; n < P; ++n) {
      c.damp[n] = std::exp(log_r * double(n));
      c.undamp[n] = 1.0 / c.damp[n];
      c.phase[n] = std::polar(1.0, 2.0 * kPi * double(n) / double(P));
    }
  }
  c.a.assign(P, 0.0);
  c.b.assign(P, 0.0);
  bool any_a = false;
  for (long m = 0; m < M; ++m) {
    double mass = cum(m + 1) - cum(m);
    bool outer = m >= m_rho;
    c.b[m + 1] = (lamp - (outer ? s_ * lam : 0.0)) * mass * c.damp[m + 1];
    if (outer) {
      c.a[m + 1] = mass * c.damp[m + 1];
      any_a = true;
    }
  }
  std::vector<double> out(M + 1, 0.0);
  if (min_mass) *min_mass = 0.0;
  if (!any_a) return out;

  // sum_l (s lambda)^{2l} B * A^{*(2l+1)},  A = d 1_{t > rho}
  c.fft.fwd(c.A, c.a);
  c.fft.fwd(c.Bh, c.b);
  const std::size_t H = P / 2 + 1;
  c.S.resize(H);
  const long l_eff = std::min<long>(l_max_, std::max<long>(0, (M / (m_rho + 1) - 2) / 2 + 1));
  const bool mid = opt_.placement == Placement::Mid;
  const double q2 = (s_ * lam) * (s_ * lam);
  for (std::size_t k = 0; k < H; ++k) {
    std::complex<double> A2 = q2 * c.A[k] * c.A[k], term = c.Bh[k] * c.A[k], acc = 0.0;
    if (mid) {
      // index shift by l + 1 on the damped sequence carries r^{-(l+1)}
      std::complex<double> w = c.phase[k] * c.undamp[1], shift = w;
      for (long l = 0; l <= l_eff; ++l, term *= A2, shift *= w) acc += term * shift;
    } else {
      for (long l = 0; l <= l_eff; ++l, term *= A2) acc += term;
    }
    c.S[k] = acc;
  }
  c.fft.inv(c.y, c.S, Eigen::Index(P));
  double mn = 0.0;
  // support starts at index 1 + (m_rho + 1), one less with midpoints
  const long n0 = m_rho + (mid ? 1 : 2);
  for (long n = n0; n <= M; ++n) {
    double v = c.y[n] * c.undamp[n];
    out[n] = v;
    mn = std::min(mn, v);
  }
  if (min_mass) *min_mass = mn;
  return out;
}

ModeWindows FiniteRangeDecomposition::windows_from_grid(double lam, double lamp, const std::vector<double>& bounds,
                                                        const Eigen::Ref<const Eigen::VectorXd>& cum,
                                                        bool with_tail) const {
  ModeWindows out;
  out.windows.assign(bounds.size() > 0 ? bounds.size() - 1 : 0, 0.0);
  std::vector<double> masses = discrete_masses(lam, lamp, cum, &out.min_mass);
  // regions: 0 below b_0, i + 1 for window i, nw + 1 beyond the last bound
  const std::size_t nw = out.windows.size();
  std::vector<double> region(nw + 2, 0.0);
  const double r = rho(), hh = h();
  const bool mid = opt_.placement == Placement::Mid;
  for (std::size_t n = 0; n < masses.size(); ++n) {
    if (masses[n] == 0.0) continue;
    double t = r + 4.0 * double(n) * hh;
    std::size_t k = 0;
    while (k < bounds.size() && t > bounds[k] + 1e-12) ++k;
    if (mid && k < bounds.size() && std::abs(t - bounds[k]) <= 1e-12) {
      // a midpoint mass sitting on a bound is shared by both sides
      region[k] += 0.5 * masses[n];
      region[k + 1] += 0.5 * masses[n];
    } else {
      region[k] += masses[n];
    }
  }
  double head = 0.0;
  for (std::size_t i = 0; i < nw; ++i) head += out.windows[i] = region[i + 1];
  if (!with_tail) return out;
  out.total = total_mass(lam, lamp);
  double below = region[0];
  out.tail = out.total - head - below;
  return out;
}

ModeWindows FiniteRangeDecomposition::mode_windows(double lam, double lamp, const std::vector<double>& bounds,
                                                   Route route) const {
  const double r = rho();
  auto spectral_ok = [&](double t) {
    if (route == Route::Spectral) return true;
    if (route == Route::Spatial) return false;
    return t / r <= double(opt_.spectral_term_limit);
  };
  if (!uses_series()) {
    ModeWindows out;
    for (std::size_t i = 0; i + 1 < bounds.size(); ++i) {
      double a = std::max(bounds[i], r), b = std::max(bounds[i + 1], r);
      out.windows.push_back(spectral_ok(b) ? base_window_spectral(a, b, lamp) : base_window_spatial(a, b, lamp));
    }
    out.tail = base_window_spatial(std::max(bounds.back(), r), kInf, lamp);
    out.total = base_window_spatial(r, kInf, lamp);
    return out;
  }
  const long M = grid_points_for(bounds.back());
  Eigen::VectorXd cum(M + 1);
  const bool spectral = spectral_ok(M * h());
  for (long m = 0; m <= M; ++m)
    cum(m) = spectral ? base_cumulative_spectral(m * h(), lamp) : base_cumulative_spatial(m * h(), lamp);
  return windows_from_grid(lam, lamp, bounds, cum);
}

double FiniteRangeDecomposition::density(double t, double lam, double lamp) const {
  if (t <= rho()) return 0.0;
  if (!uses_series()) return base_density(t, lamp);
  std::vector<double> ts;
  auto d = density_profile(lam, lamp, t + 8.0 * rho(), &ts);
  std::size_t best = 0;
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (std::abs(ts[i] - t) < std::abs(ts[best] - t)) best = i;
  return d[best];
}

std::vector<double> FiniteRangeDecomposition::density_profile(double lam, double lamp, double t_max,
                                                              std::vector<double>* ts) const {
  FrdOptions o = opt_;
  o.placement = Placement::Mid;
  FiniteRangeDecomposition mid(profile_, J_, s_, m2_, o);
  const long M = mid.grid_points_for(t_max);
  Eigen::VectorXd cum(M + 1);
  for (long m = 0; m <= M; ++m) cum(m) = base_cumulative_spectral(m * h(), lamp);
  std::vector<double> masses;
  if (!uses_series()) {
    masses.resize(M + 1);
    if (ts) ts->clear();
    for (long n = 0; n <= M; ++n) {
      double t = rho() + 4.0 * n * h();
      masses[n] = base_density(t, lamp);
      if (ts) ts->push_back(t);
    }
    return masses;
  }
  double mn;
  masses = mid.discrete_masses(lam, lamp, cum, &mn);
  if (ts) ts->clear();
  for (long n = 0; n <= M; ++n) {
    masses[n] /= 4.0 * h();
    if (ts) ts->push_back(rho() + 4.0 * n * h());
  }
  return masses;
}

SpectralCumulative::SpectralCumulative(const BumpProfile& profile, double rho, std::vector<double> u)
    : rho_(rho), fh0_(profile.f_hat(0.0)) {
  u_ = Eigen::Map<Eigen::VectorXd>(u.data(), Eigen::Index(u.size()));
  double umax = u_.size() ? u_.maxCoeff() : 0.0;
  K_ = std::max<long>(0, long(std::ceil(umax / rho - 1e-12)) - 1);
  S_ = Eigen::MatrixXd::Zero(u_.size(), K_);
  for (Eigen::Index i = 0; i < u_.size(); ++i)
    for (long k = 1; k <= K_; ++k)
      if (double(k) * rho < u_(i)) S_(i, k - 1) = 2.0 * k * rho * profile.H(k * rho / u_(i));
}

Eigen::MatrixXd SpectralCumulative::evaluate(const Eigen::VectorXd& theta) const {
  Eigen::MatrixXd C(K_, theta.size());
  for (Eigen::Index j = 0; j < theta.size(); ++j)
    for (long k = 1; k <= K_; ++k) C(k - 1, j) = std::cos(double(k) * theta(j));
  Eigen::MatrixXd out = u_ * Eigen::RowVectorXd::Constant(theta.size(), fh0_);
  if (K_ > 0) out.noalias() += S_ * C;
  return out / (2.0 * kPi * rho_);
}

}  // namespace dglab
