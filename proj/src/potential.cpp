#include "dglab/potential.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <unsupported/Eigen/FFT>

namespace dglab {

double smoothed_F(double phi, double gamma_beta) {
  double acc = 1.0;
  for (int q = 1;; ++q) {
    double t = 2.0 * std::exp(-0.5 * gamma_beta * double(q) * q);
    if (t < 1e-17) break;
    acc += t * std::cos(q * phi);
  }
  return acc;
}

double tilde_z_bound(double gamma_beta, int q) { return 16.0 * std::exp(-0.25 * gamma_beta * (1.0 + q)); }

namespace {

// Cosine coefficients of log F from the logarithm series in the Fourier algebra.
// Returns empty if ||F - 1||_1 is too large for the series.
std::vector<double> log_series_coefficients(double gb, int q_max, double* z0) {
  const int K = 2 * q_max + 12, W = 2 * K + 1;
  Eigen::VectorXd g = Eigen::VectorXd::Zero(W);
  for (int q = 1; q <= K; ++q) g(K + q) = g(K - q) = std::exp(-0.5 * gb * double(q) * q);
  double norm = g.sum();
  if (!(norm < 0.5)) return {};
  Eigen::VectorXd pw = g, acc = g;
  auto smallest = [&]() {
    double m = std::abs(acc(K + 1));
    for (int q = 2; q <= q_max; ++q) m = std::min(m, std::abs(acc(K + q)));
    return m;
  };
  for (int n = 2; n < 2000; ++n) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(W);
    for (int a = 0; a < W; ++a) {
      if (pw(a) == 0.0) continue;
      for (int b = 0; b < W; ++b) {
        int c = a + b - K;
        if (c >= 0 && c < W) next(c) += pw(a) * g(b);
      }
    }
    pw.swap(next);
    double sgn = (n % 2 == 0) ? -1.0 : 1.0;
    acc += (sgn / n) * pw;
    if (pw.cwiseAbs().sum() / n < 1e-18 * smallest()) break;
  }
  if (z0) *z0 = acc(K);
  std::vector<double> z(q_max);
  for (int q = 1; q <= q_max; ++q) z[q - 1] = 2.0 * acc(K + q);
  return z;
}

}  // namespace

PotentialCoefficients tilde_z_coefficients(double beta, double gamma, int q_max, int fft_points, double threshold) {
  if (!(beta > 0.0) || !(gamma > 0.0) || q_max < 1 || fft_points < 4 * q_max)
    throw Error(ErrorKind::InvalidParameter, "tilde_z_coefficients");
  PotentialCoefficients out;
  out.beta = beta;
  out.gamma = gamma;
  out.c_f = 0.25 * gamma;
  const double gb = gamma * beta;
  out.below_threshold = gb < threshold;

  std::vector<double> logF(fft_points);
  out.min_F = std::numeric_limits<double>::infinity();
  double maxlog = 0.0;
  for (int k = 0; k < fft_points; ++k) {
    double F = smoothed_F(2.0 * kPi * k / fft_points, gb);
    out.min_F = std::min(out.min_F, F);
    if (!(F > 0.0)) throw Error(ErrorKind::LogDomain, "F <= 0 on the period grid");
    logF[k] = std::log(F);
    maxlog = std::max(maxlog, std::abs(logF[k]));
  }
  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> X;
  fft.fwd(X, logF);
  const double P = fft_points;
  out.dft_floor = 64.0 * std::numeric_limits<double>::epsilon() * maxlog;
  out.z_tilde_dft.resize(q_max);
  double smax = 0.0;
  for (int q = 1; q <= q_max; ++q) {
    out.z_tilde_dft[q - 1] = 2.0 * X[q].real() / P;
    smax = std::max(smax, 2.0 * std::abs(X[q].imag()) / P);
  }
  out.sine_max = {smax};

  double z0 = X[0].real() / P;
  std::vector<double> series = log_series_coefficients(gb, q_max, &z0);
  out.z0 = z0;
  out.z_tilde = series.empty() ? out.z_tilde_dft : series;
  return out;
}

double covariance_C_mode(double gamma, double s, double m2, double lam, double lamJ) {
  double c = 1.0 / (lamJ + m2) - gamma;
  if (!(c > 0.0)) throw Error(ErrorKind::InvalidParameter, "(lambda_J + m2)^-1 - gamma must be positive");
  double d = 1.0 / c + s * lam;
  if (!(d > 0.0)) throw Error(ErrorKind::InvalidParameter, "C(s, m2) not positive");
  return 1.0 / d;
}

double covariance_Ctilde_mode(double gamma, double s, double m2, double lam, double lamJ) {
  double a = 1.0 - s * gamma * lam;
  return gamma * a + a * a * covariance_C_mode(gamma, s, m2, lam, lamJ);
}

double covariance_C_mode(const StepDistribution& J, double gamma, double s, double m2, double p1, double p2) {
  return covariance_C_mode(gamma, s, m2, lambda_at(p1, p2), lambda_J_at(J, p1, p2));
}

double covariance_Ctilde_mode(const StepDistribution& J, double gamma, double s, double m2, double p1, double p2) {
  return covariance_Ctilde_mode(gamma, s, m2, lambda_at(p1, p2), lambda_J_at(J, p1, p2));
}

// ---- test functions ----

namespace {

using ModeMap = std::map<std::pair<long, long>, std::complex<double>>;

void check_mean_zero(const TestFunction& f) {
  for (const auto& m : f)
    if (m.n1 == 0 && m.n2 == 0 && m.a != 0.0) throw Error(ErrorKind::InvalidInput, "test function has nonzero mean");
}

}  // namespace

double continuum_green_form(const TestFunction& f) {
  check_mean_zero(f);
  std::map<std::pair<int, int>, std::complex<double>> c;
  for (const auto& m : f) {
    if (m.n1 == 0 && m.n2 == 0) continue;
    c[{m.n1, m.n2}] += std::complex<double>(m.a, -m.b) / 2.0;
    c[{-m.n1, -m.n2}] += std::complex<double>(m.a, m.b) / 2.0;
  }
  double acc = 0.0;
  for (const auto& [k, v] : c) acc += std::norm(v) / (4.0 * kPi * kPi * double(k.first * k.first + k.second * k.second));
  return acc;
}

Field f_N_field(const TestFunction& f, const TorusGeometry& g) {
  check_mean_zero(f);
  const long S = g.side();
  const double V = double(g.volume());
  Field out = Field::Zero(S, S);
  for (long x = 0; x < S; ++x)
    for (long y = 0; y < S; ++y) {
      double v = 0.0;
      for (const auto& m : f) {
        double ph = 2.0 * kPi * (double(m.n1) * x + double(m.n2) * y) / double(S);
        v += m.a * std::cos(ph) + m.b * std::sin(ph);
      }
      out(x, y) = v;
    }
  out.array() -= out.mean();
  return out / V;
}

TestFunctionEmbedding embed_test_function(const TestFunction& f, const TorusGeometry& g, const StepDistribution& J,
                                          double gamma, double s, double m2, const RegulatorParams* reg,
                                          long max_side_for_field) {
  check_mean_zero(f);
  TestFunctionEmbedding e;
  e.geometry = g;
  const long S = g.side();
  const double V = double(g.volume());
  for (const auto& m : f) {
    std::pair<long, long> kp{g.wrap(m.n1), g.wrap(m.n2)}, km{g.wrap(-m.n1), g.wrap(-m.n2)};
    e.f_hat[kp] += std::complex<double>(m.a, -m.b) / 2.0;
    e.f_hat[km] += std::complex<double>(m.a, m.b) / 2.0;
  }
  e.f_hat.erase({0, 0});  // the lattice mean is subtracted
  for (auto it = e.f_hat.begin(); it != e.f_hat.end();) it = std::abs(it->second) == 0.0 ? e.f_hat.erase(it) : ++it;

  for (const auto& [k, c] : e.f_hat) {
    double lam = torus_lambda(k.first, k.second, S), lamJ = torus_lambda_J(J, k.first, k.second, S);
    double ct = covariance_Ctilde_mode(gamma, s, m2, lam, lamJ);
    std::complex<double> u = c * ct / (1.0 + s * gamma * lam);
    e.green_form += std::norm(c) / lamJ;
    e.ctilde_form += std::norm(c) * ct;
    e.grad_u_norm2 += lam * std::norm(u);
  }
  e.green_form /= V;
  e.ctilde_form /= V;
  e.grad_u_norm2 /= V;
  if (S <= max_side_for_field) {
    e.f_sum = f_N_field(f, g).sum();
    if (reg) {
      Field u = u_N_field(e, J, gamma, s, m2);
      e.log_G = regulator_log_G(u, whole_torus(g.N, 1), g.L, *reg);
    }
  }
  return e;
}

Field u_N_field(const TestFunctionEmbedding& e, const StepDistribution& J, double gamma, double s, double m2) {
  const long S = e.geometry.side();
  const double V = double(e.geometry.volume());
  Field u = Field::Zero(S, S);
  for (const auto& [k, c] : e.f_hat) {
    double lam = torus_lambda(k.first, k.second, S), lamJ = torus_lambda_J(J, k.first, k.second, S);
    std::complex<double> uh = c * covariance_Ctilde_mode(gamma, s, m2, lam, lamJ) / (1.0 + s * gamma * lam);
    for (long x = 0; x < S; ++x)
      for (long y = 0; y < S; ++y) {
        double ph = 2.0 * kPi * (double(k.first) * x + double(k.second) * y) / double(S);
        u(x, y) += (uh * std::complex<double>(std::cos(ph), std::sin(ph))).real();
      }
  }
  return u / V;
}

// ---- small tori ----

Eigen::MatrixXd laplacian_matrix_J(const StepDistribution& J, int Lx, int Ly) {
  const int n = Lx * Ly;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  const double w = 1.0 / double(J.size());
  for (int x = 0; x < Lx; ++x)
    for (int y = 0; y < Ly; ++y) {
      int i = x + Lx * y;
      for (const auto& o : J.offsets) {
        int xx = ((x + o(0)) % Lx + Lx) % Lx, yy = ((y + o(1)) % Ly + Ly) % Ly;
        M(i, i) += w;
        M(i, xx + Lx * yy) -= w;
      }
    }
  return M;
}

Eigen::MatrixXd laplacian_matrix(int Lx, int Ly) { return 4.0 * laplacian_matrix_J(nearest_neighbour(), Lx, Ly); }


}  // namespace dglab
