#include "dglab/potential.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>
#include <unsupported/Eigen/FFT>

namespace dglab {

GaussHermite gauss_hermite(int n) {
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) T(k, k - 1) = T(k - 1, k) = std::sqrt(double(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
  GaussHermite g;
  g.x = es.eigenvalues();
  g.w = es.eigenvectors().row(0).array().square().transpose();
  return g;
}

namespace {

// E[exp(h(V sqrt(D) xi))] over standard normal xi by tensor Gauss-Hermite.
template <typename H>
std::pair<double, double> gh_expectation(const Eigen::MatrixXd& B, int nodes, H&& h) {
  const int n = int(B.rows());
  GaussHermite g = gauss_hermite(nodes);
  std::vector<int> idx(n, 0);
  Eigen::VectorXd xi(n);
  std::pair<double, double> acc{0.0, 0.0};
  for (;;) {
    double w = 1.0;
    for (int i = 0; i < n; ++i) {
      xi(i) = g.x(idx[i]);
      w *= g.w(idx[i]);
    }
    if (w > 1e-300) {
      auto v = h(Eigen::VectorXd(B * xi));
      acc.first += w * v.first;
      acc.second += w * v.second;
    }
    int i = 0;
    while (i < n && ++idx[i] == nodes) idx[i++] = 0;
    if (i == n) break;
  }
  return acc;
}

}  // namespace

ReformulationResult reformulation_check(const StepDistribution& J, int Lx, int Ly, double beta, double gamma, double s,
                                        double m2, const Eigen::VectorXd& f, double window_sd, int gh_nodes) {
  const int n = Lx * Ly;
  if (n > 4) throw Error(ErrorKind::SizeLimit, "reformulation_check is limited to 4 sites");
  if (f.size() != n) throw Error(ErrorKind::InvalidParameter, "test vector size");
  if (!(m2 > 0.0)) throw Error(ErrorKind::InvalidParameter, "reformulation_check needs m2 > 0");
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd M = laplacian_matrix_J(J, Lx, Ly) + m2 * I;
  const Eigen::MatrixXd Lap = laplacian_matrix(Lx, Ly);
  const Eigen::MatrixXd Cm = M.inverse() - gamma * I;
  const Eigen::MatrixXd Cs = (Cm.inverse() + s * Lap).inverse();
  const Eigen::MatrixXd P = I - s * gamma * Lap;  // 1 + s gamma Delta
  const Eigen::MatrixXd Ct = gamma * P + P * Cs * P;
  const Eigen::MatrixXd A = P.inverse() * Ct;
  ReformulationResult r;

  // left: truncated lattice sums
  const double a = 2.0 * kPi / std::sqrt(beta);
  const Eigen::MatrixXd Minv = M.inverse();
  auto lattice_sum = [&](const Eigen::VectorXd& g, double* tail) {
    Eigen::VectorXd mu = Minv * g;
    std::vector<long> lo(n), hi(n);
    for (int i = 0; i < n; ++i) {
      double sd = std::sqrt(Minv(i, i));
      lo[i] = long(std::floor((mu(i) - window_sd * sd) / a));
      hi[i] = long(std::ceil((mu(i) + window_sd * sd) / a));
    }
    // exponent relative to its value at the mean for stability
    double e0 = 0.5 * mu.dot(M * mu);
    std::vector<long> k(lo);
    Eigen::VectorXd sig(n);
    double acc = 0.0, edge = 0.0;
    long terms = 0;
    for (;;) {
      bool on_edge = false;
      for (int i = 0; i < n; ++i) {
        sig(i) = a * double(k[i]);
        on_edge = on_edge || k[i] == lo[i] || k[i] == hi[i];
      }
      double w = std::exp(-0.5 * sig.dot(M * sig) + g.dot(sig) - e0);
      acc += w;
      if (on_edge) edge = std::max(edge, w);
      ++terms;
      int i = 0;
      while (i < n && ++k[i] > hi[i]) k[i] = lo[i], ++i;
      if (i == n) break;
    }
    *tail = std::max(*tail, edge / acc);
    r.sigma_terms += terms;
    return std::log(acc) + e0;
  };
  double tail = 0.0;
  double l1 = lattice_sum(f, &tail), l0 = lattice_sum(Eigen::VectorXd::Zero(n), &tail);
  r.lhs_tail = tail;
  if (tail > 1e-13) throw Error(ErrorKind::IncreaseWindow, "sigma window truncation above tolerance");
  r.lhs_ratio = std::exp(l1 - l0);

  // right: Gaussian expectation by tensor Gauss-Hermite
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Cs);
  Eigen::MatrixXd B = es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal();
  const double gb = gamma * beta, sb = std::sqrt(beta);
  auto logZ0 = [&](const Eigen::VectorXd& phi) {
    double u = 0.5 * s * phi.dot(Lap * phi);
    for (int i = 0; i < n; ++i) u += std::log(smoothed_F(sb * phi(i), gb));
    return u;
  };
  const Eigen::VectorXd shift = A * f;
  auto rhs = [&](int nodes) {
    auto e = gh_expectation(B, nodes, [&](const Eigen::VectorXd& phi) {
      return std::pair{std::exp(logZ0(phi + shift)), std::exp(logZ0(phi))};
    });
    return std::exp(0.5 * f.dot(Ct * f)) * e.first / e.second;
  };
  int nodes = gh_nodes > 0 ? gh_nodes : (n <= 2 ? 96 : 44);
  double r1 = rhs(nodes), r2 = rhs(nodes + 12);
  r.gh_nodes = nodes + 12;
  r.rhs_ratio = r2;
  r.rhs_change = std::abs(r2 - r1) / std::abs(r2);
  return r;
}

}  // namespace dglab
