#include "dglab/covariance.hpp"

#include <unsupported/Eigen/FFT>
#include <cmath>
#include <complex>

#include "dglab/quadrature.hpp"

namespace dglab {

namespace {

struct ModeTables {
  std::vector<Eigen::MatrixXd> windows;
  Eigen::MatrixXd tail;
  double min_mass = 0.0;
};

void fill_symmetric(Eigen::MatrixXd& M, long R, long a, long b, double v) {
  for (long x : {a, (R - a) % R})
    for (long y : {b, (R - b) % R}) {
      M(x, y) = v;
      M(y, x) = v;
    }
}

// Windows (b_i, b_{i+1}] and optionally the tail for every dual index of the torus of side R.
ModeTables mode_tables(const FiniteRangeDecomposition& F, long R, const std::vector<double>& bounds, bool want_tail) {
  const double r = F.rho();
  const std::size_t nw = bounds.size() - 1;
  std::vector<std::pair<long, long>> modes;
  for (long a = 0; a <= R / 2; ++a)
    for (long b = a; b <= R / 2; ++b) modes.emplace_back(a, b);
  const std::size_t nm = modes.size();
  std::vector<double> lam(nm), lamp(nm);
  for (std::size_t i = 0; i < nm; ++i) {
    lam[i] = torus_lambda(modes[i].first, modes[i].second, R);
    lamp[i] = torus_lambda_J(F.J(), modes[i].first, modes[i].second, R) + F.m2();
  }
  Eigen::MatrixXd W(nm, nw), T = Eigen::VectorXd::Zero(nm);
  std::vector<double> mins(worker_count(), 0.0);

  std::vector<double> u;
  if (!F.uses_series()) {
    for (double b : bounds) u.push_back(std::max(b, r));
  } else {
    long M = F.grid_points_for(bounds.back());
    for (long m = 0; m <= M; ++m) u.push_back(m * F.h());
  }
  const bool spectral = u.back() / r <= double(F.options().spectral_term_limit);
  std::unique_ptr<SpectralCumulative> sc;
  if (spectral) sc = std::make_unique<SpectralCumulative>(F.profile(), r, u);

  const std::size_t batch = 256, nb = (nm + batch - 1) / batch;
  parallel_blocks(nb, [&](std::size_t b0, std::size_t b1, unsigned w) {
    for (std::size_t bi = b0; bi < b1; ++bi) {
      std::size_t i0 = bi * batch, i1 = std::min(nm, i0 + batch);
      Eigen::MatrixXd cum(u.size(), i1 - i0);
      if (spectral) {
        Eigen::VectorXd th(i1 - i0);
        for (std::size_t i = i0; i < i1; ++i) th(i - i0) = theta_of(lamp[i]);
        cum = sc->evaluate(th);
      } else {
        for (std::size_t i = i0; i < i1; ++i)
          for (std::size_t m = 0; m < u.size(); ++m) cum(m, i - i0) = F.base_cumulative_spatial(u[m], lamp[i]);
      }
      for (std::size_t i = i0; i < i1; ++i) {
        auto col = cum.col(i - i0);
        if (!F.uses_series()) {
          for (std::size_t k = 0; k < nw; ++k) W(i, k) = col(k + 1) - col(k);
          if (want_tail) T(i) = F.base_window_spatial(u.back(), kInf, lamp[i]);
        } else {
          ModeWindows mw = F.windows_from_grid(lam[i], lamp[i], bounds, col, want_tail);
          for (std::size_t k = 0; k < nw; ++k) W(i, k) = mw.windows[k];
          T(i) = mw.tail;
          mins[w] = std::min(mins[w], mw.min_mass);
        }
      }
    }
  });

  ModeTables out;
  out.windows.assign(nw, Eigen::MatrixXd::Zero(R, R));
  if (want_tail) out.tail = Eigen::MatrixXd::Zero(R, R);
  for (std::size_t i = 0; i < nm; ++i) {
    for (std::size_t k = 0; k < nw; ++k) fill_symmetric(out.windows[k], R, modes[i].first, modes[i].second, W(i, k));
    if (want_tail) fill_symmetric(out.tail, R, modes[i].first, modes[i].second, T(i));
  }
  out.min_mass = *std::min_element(mins.begin(), mins.end());
  return out;
}

long min_image(long x, long R) {
  x %= R;
  if (x < 0) x += R;
  return std::min(x, R - x);
}

}  // namespace

double ScaleCovariance::at(long x1, long x2) const {
  auto w = [&](long a) { return ((a % R) + R) % R; };
  return position(w(x1), w(x2));
}

double ScaleCovariance::max_outside(double radius) const {
  double mx = 0.0;
  for (long a = 0; a < R; ++a)
    for (long b = 0; b < R; ++b)
      if (double(std::max(min_image(a, R), min_image(b, R))) >= radius) mx = std::max(mx, std::abs(position(a, b)));
  return mx;
}

double scale_bound(int L, double j) { return std::pow(double(L), j) / 4.0; }

Eigen::MatrixXd window_hat(const FiniteRangeDecomposition& F, long R, double ta, double tb, double* min_mass) {
  ModeTables t = mode_tables(F, R, {ta, tb}, false);
  if (min_mass) *min_mass = t.min_mass;
  return t.windows[0];
}

Eigen::MatrixXd position_from_hat(const Eigen::MatrixXd& hat) {
  const long R = hat.rows();
  Eigen::FFT<double> fft;
  Eigen::MatrixXcd tmp(R, R);
  std::vector<std::complex<double>> in(R), out;
  for (long a = 0; a < R; ++a) {
    for (long b = 0; b < R; ++b) in[b] = hat(a, b);
    fft.inv(out, in);
    for (long b = 0; b < R; ++b) tmp(a, b) = out[b];
  }
  Eigen::MatrixXd pos(R, R);
  for (long b = 0; b < R; ++b) {
    for (long a = 0; a < R; ++a) in[a] = tmp(a, b);
    fft.inv(out, in);
    for (long a = 0; a < R; ++a) pos(a, b) = out[a].real();
  }
  return pos;
}

ScaleCovariance window_covariance(const FiniteRangeDecomposition& F, long R, double ta, double tb) {
  ScaleCovariance c;
  c.ta = ta;
  c.tb = tb;
  c.R = R;
  c.s = F.s();
  c.m2 = F.m2();
  c.J_name = F.J().name;
  c.range_radius = tb;
  c.hat = window_hat(F, R, ta, tb, &c.min_mass);
  c.position = position_from_hat(c.hat);
  return c;
}

ScaleCovariance scale_covariance(const FiniteRangeDecomposition& F, int L, int j, long R) {
  if (L < 2 || j < 0) throw Error(ErrorKind::InvalidParameter, "scale_covariance needs L >= 2 and j >= 0");
  double tb = scale_bound(L, j + 1);
  if (R == 0) R = 4 * long(std::llround(std::pow(double(L), j + 1)));
  ScaleCovariance c = window_covariance(F, R, scale_bound(L, j), tb);
  c.j = j;
  return c;
}

ScaleCovariance fractional_covariance(const FiniteRangeDecomposition& F, int L, int M, int j, int k, long R) {
  if (M < 1 || k < 0 || k >= M) throw Error(ErrorKind::InvalidParameter, "fractional scale needs 0 <= k < M");
  long ell = std::lround(std::pow(double(L), 1.0 / M));
  long p = 1;
  for (int i = 0; i < M; ++i) p *= ell;
  if (p != L) throw Error(ErrorKind::InvalidParameter, "L is not a perfect M-th power");
  double ta = scale_bound(L, j + double(k) / M), tb = scale_bound(L, j + double(k + 1) / M);
  if (R == 0) R = 4 * long(std::ceil(tb - 1e-9));
  ScaleCovariance c = window_covariance(F, R, ta, tb);
  c.j = j;
  return c;
}

ZeroMode zero_mode(const FiniteRangeDecomposition& F, int L, int N, int panels) {
  if (!(F.m2() > 0.0)) throw Error(ErrorKind::ZeroModeDivergence, "t_N requires m2 > 0");
  if (panels < 2 || panels % 2) throw Error(ErrorKind::InvalidParameter, "panel count must be even");
  const double r = F.rho(), b = scale_bound(L, N - 1), lamp = F.m2();
  ZeroMode z;
  z.c_hat0 = 1.0 / F.m2() - F.gamma();
  z.t_N_grid = z.c_hat0 - F.mode_windows(0.0, lamp, {0.0, b}).windows[0];

  std::vector<double> y(panels + 1, 0.0);
  double step = 0.0;
  if (!F.uses_series()) {
    if (b > r) {
      step = (b - r) / panels;
      for (int i = 0; i <= panels; ++i) y[i] = F.base_density(r + i * step, lamp);
    }
  } else {
    // D_t(0) = (m2 / 4) int_rho^T d(T - u) d(u) du at T = (t - rho) / 4
    const double Tb = (b - r) / 4.0;
    if (Tb > r) {
      step = (Tb - r) / panels;
      GaussRule g = gauss_legendre(32);
      for (int i = 0; i <= panels; ++i) {
        double T = r + i * step, acc = 0.0;
        const int sub = 4;
        for (int q = 0; q < sub; ++q) {
          double a0 = r + (T - r) * q / sub, a1 = r + (T - r) * (q + 1) / sub;
          acc += integrate(g, a0, a1, [&](double u) { return F.base_density(T - u, lamp) * F.base_density(u, lamp); });
        }
        y[i] = lamp * acc;
      }
    }
  }
  z.t_N = z.c_hat0 - (step > 0 ? simpson(y, step) : 0.0);
  z.t_N_trapezoid = z.c_hat0 - (step > 0 ? trapezoid(y, step) : 0.0);
  return z;
}

TorusDecomposition torus_decomposition(const FiniteRangeDecomposition& F, int L, int N) {
  if (L < 2 || N < 1) throw Error(ErrorKind::InvalidParameter, "torus decomposition needs L >= 2, N >= 1");
  TorusDecomposition d;
  d.L = L;
  d.N = N;
  d.R = long(std::llround(std::pow(double(L), N)));
  std::vector<double> bounds;
  for (int j = 0; j <= N - 1; ++j) bounds.push_back(scale_bound(L, j));
  ModeTables t = mode_tables(F, d.R, bounds, true);
  d.scales = std::move(t.windows);
  d.last = std::move(t.tail);
  d.min_mass = t.min_mass;
  d.last(0, 0) = 0.0;
  d.target = Eigen::MatrixXd::Zero(d.R, d.R);
  for (long a = 0; a < d.R; ++a)
    for (long b = 0; b < d.R; ++b) {
      if (a == 0 && b == 0) continue;
      double lam = torus_lambda(a, b, d.R), lamp = torus_lambda_J(F.J(), a, b, d.R) + F.m2();
      d.target(a, b) = F.C_hat(lam, lamp);
      double sum = d.last(a, b);
      for (const auto& S : d.scales) sum += S(a, b);
      d.max_rel_residual = std::max(d.max_rel_residual, std::abs(sum / d.target(a, b) - 1.0));
    }
  for (const auto& S : d.scales) d.min_hat = std::min(d.min_hat, S.minCoeff());
  if (F.m2() > 0.0) {
    d.target(0, 0) = 1.0 / F.m2() - F.gamma();
    d.zero = zero_mode(F, L, N);
    d.has_zero_mode = true;
  }
  return d;
}

namespace {

std::vector<double> infinite_volume_values(const FiniteRangeDecomposition& F0, double ta, double tb,
                                           const std::vector<std::pair<int, int>>& xs,
                                           const InfiniteVolumeOptions& opt) {
  const double r = F0.rho();
  std::unique_ptr<FiniteRangeDecomposition> coarse;
  const FiniteRangeDecomposition* F = &F0;
  if (F0.uses_series()) {
    FrdOptions o = F0.options();
    o.placement = Placement::Mid;
    o.fft_oversample = std::min(o.fft_oversample, 3);
    double T = std::max(0.0, (tb - r) / 4.0);
    while (T / o.cell_width > opt.max_grid && 2.0 * o.cell_width <= r) o.cell_width *= 2.0;
    double q = r / o.cell_width;
    if (std::abs(q - std::round(q)) > 1e-9 || q < 1.0)
      throw Error(ErrorKind::SizeLimit, "window too long for the s != 0 grid at this rho");
    coarse = std::make_unique<FiniteRangeDecomposition>(F0.profile_ptr(), F0.J(), F0.s(), F0.m2(), o);
    F = coarse.get();
  }
  auto hat = [&](double p1, double p2) {
    double lam = lambda_at(p1, p2), lamp = lambda_J_at(F->J(), p1, p2) + F->m2();
    double th = theta_of(lamp);
    // base kernel beyond ta is ~exp(-2 sqrt(theta t / rho)): the window is negligible
    double ta_eff = F->uses_series() ? (ta - r) / 4.0 : ta;
    if (ta_eff > r && 2.0 * std::sqrt(th * ta_eff / r) > 80.0) return 0.0;
    return F->mode_windows(lam, lamp, {ta, tb}, Route::Spatial).windows[0];
  };
  GaussRule g = gauss_legendre(opt.nodes);
  std::vector<double> acc(xs.size(), 0.0);
  auto square = [&](double a1, double b1, double a2, double b2) {
    double m1 = 0.5 * (a1 + b1), h1 = 0.5 * (b1 - a1), m2 = 0.5 * (a2 + b2), h2 = 0.5 * (b2 - a2);
    for (int i = 0; i < g.x.size(); ++i)
      for (int k = 0; k < g.x.size(); ++k) {
        double p1 = m1 + h1 * g.x(i), p2 = m2 + h2 * g.x(k);
        double v = g.w(i) * g.w(k) * h1 * h2 * hat(p1, p2);
        for (std::size_t n = 0; n < xs.size(); ++n)
          acc[n] += v * std::cos(p1 * xs[n].first) * std::cos(p2 * xs[n].second);
      }
  };
  int K = int(std::ceil(std::log2(8.0 * kPi * std::max(tb, r) / r))) + opt.extra_levels;
  for (int k = 0; k < K; ++k) {
    double b = kPi * std::ldexp(1.0, -k), a = 0.5 * b;
    square(a, b, 0.0, a);
    square(0.0, a, a, b);
    square(a, b, a, b);
  }
  double e = kPi * std::ldexp(1.0, -K);
  square(0.0, e, 0.0, e);
  for (double& v : acc) v /= kPi * kPi;
  return acc;
}

}  // namespace

double infinite_volume_covariance(const FiniteRangeDecomposition& F, double ta, double tb, int x1, int x2,
                                  const InfiniteVolumeOptions& opt) {
  return infinite_volume_values(F, ta, tb, {{x1, x2}}, opt)[0];
}

ScaleValues infinite_volume_scale(const FiniteRangeDecomposition& F, int L, int j, const InfiniteVolumeOptions& opt) {
  auto v = infinite_volume_values(F, scale_bound(L, j), scale_bound(L, j + 1), {{0, 0}, {1, 0}}, opt);
  return {v[0], v[1]};
}

}  // namespace dglab
