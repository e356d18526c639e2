#include "dglab/lattice.hpp"

#include <algorithm>
#include <set>

namespace dglab {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::DomainError: return "domain-error";
    case ErrorKind::ConstructionFailure: return "construction-failure";
    case ErrorKind::SeriesDivergence: return "series-divergence";
    case ErrorKind::ZeroModeDivergence: return "zero-mode-divergence";
    case ErrorKind::SizeLimit: return "size-limit";
    case ErrorKind::LogDomain: return "log-domain";
    case ErrorKind::Subcritical: return "subcritical-parameter";
    case ErrorKind::Dependency: return "dependency";
    case ErrorKind::Sampling: return "sampling";
    case ErrorKind::InsufficientSampling: return "insufficient-sampling";
    case ErrorKind::IncreaseWindow: return "increase-window";
    case ErrorKind::PreconditionViolation: return "precondition-violation";
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::Checksum: return "checksum";
  }
  return "unknown";
}

TorusGeometry::TorusGeometry(int L_, int N_) : L(L_), N(N_) {
  if (L < 2 || N < 1) throw Error(ErrorKind::InvalidParameter, "torus needs L >= 2 and N >= 1");
  long s = 1;
  for (int i = 0; i < N; ++i) {
    s *= L;
    if (s > (1L << 24)) throw Error(ErrorKind::InvalidParameter, "torus side too large");
  }
}

long TorusGeometry::side() const {
  long s = 1;
  for (int i = 0; i < N; ++i) s *= L;
  return s;
}

double variance_v2(const std::vector<Offset>& offsets) {
  double acc = 0.0;
  for (const auto& x : offsets) acc += double(x(0)) * double(x(0));
  return acc / (2.0 * double(offsets.size()));
}

namespace {

struct OffsetLess {
  bool operator()(const Offset& a, const Offset& b) const {
    return a(0) != b(0) ? a(0) < b(0) : a(1) < b(1);
  }
};

}  // namespace

StepDistribution make_step_distribution(std::vector<Offset> offsets, std::string name, int theta_resolution) {
  std::set<Offset, OffsetLess> set(offsets.begin(), offsets.end());
  if (set.size() != offsets.size()) throw Error(ErrorKind::InvalidParameter, "duplicate offsets");
  if (set.count(Offset(0, 0))) throw Error(ErrorKind::InvalidParameter, "0 in offsets");
  for (const auto& x : set) {
    const Offset images[] = {Offset(-x(0), x(1)), Offset(x(0), -x(1)), Offset(x(1), x(0))};
    for (const auto& y : images)
      if (!set.count(y)) throw Error(ErrorKind::InvalidParameter, "offsets not closed under lattice symmetries");
  }
  for (const auto& e : unit_directions())
    if (!set.count(e)) throw Error(ErrorKind::InvalidParameter, "nearest-neighbour vectors missing");

  StepDistribution J;
  J.offsets.assign(set.begin(), set.end());
  J.name = std::move(name);
  for (const auto& x : J.offsets) J.rho = std::max({J.rho, std::abs(x(0)), std::abs(x(1))});
  J.v2 = variance_v2(J.offsets);
  J.theta = theta_resolution > 0 ? spectral_theta(J, theta_resolution) : 0.0;
  return J;
}

StepDistribution nearest_neighbour() {
  StepDistribution J = make_step_distribution(unit_directions(), "nn", 0);
  J.theta = 0.25;  // lambda_J = lambda / 4 identically
  return J;
}

StepDistribution standard_range_rho(int rho, int theta_resolution) {
  if (rho < 1) throw Error(ErrorKind::InvalidParameter, "rho must be >= 1");
  std::vector<Offset> off;
  for (int a = -rho; a <= rho; ++a)
    for (int b = -rho; b <= rho; ++b)
      if (a != 0 || b != 0) off.emplace_back(a, b);
  return make_step_distribution(std::move(off), "J" + std::to_string(rho), theta_resolution);
}

double torus_lambda(long k1, long k2, long R) {
  auto w = [R](long k) { return 2.0 * one_minus_cos(2.0 * kPi * double(((k % R) + R) % R) / double(R)); };
  return w(k1) + w(k2);
}

double torus_lambda_J(const StepDistribution& J, long k1, long k2, long R) {
  double acc = 0.0;
  for (const auto& x : J.offsets) {
    long m = ((k1 * x(0) + k2 * x(1)) % R + R) % R;
    acc += one_minus_cos(2.0 * kPi * double(m) / double(R));
  }
  return acc / double(J.size());
}

namespace {

double ratio(const StepDistribution& J, double p1, double p2) {
  return lambda_J_at(J, p1, p2) / lambda_at(p1, p2);
}

}  // namespace

double grid_min_ratio(const StepDistribution& J, int res) {
  // Quadrant suffices: lambda and lambda_J are even in each coordinate.
  const int h = res / 2;
  const int R = J.rho;
  std::vector<double> c((h + 1) * (R + 1));
  for (int i = 0; i <= h; ++i)
    for (int a = 0; a <= R; ++a) c[i * (R + 1) + a] = std::cos(2.0 * kPi * i * a / res);
  double best = 1e300;
  for (int i = 0; i <= h; ++i)
    for (int k = 0; k <= i; ++k) {
      if (i == 0 && k == 0) continue;
      double s = 0.0;
      for (const auto& x : J.offsets) s += c[i * (R + 1) + std::abs(x(0))] * c[k * (R + 1) + std::abs(x(1))];
      double lj = 1.0 - s / double(J.size());
      double p1 = 2.0 * kPi * i / res, p2 = 2.0 * kPi * k / res;
      double r = lj / lambda_at(p1, p2);
      best = std::min(best, r);
    }
  return best;
}

double spectral_theta(const StepDistribution& J, int grid_resolution) {
  if (grid_resolution < 64) throw Error(ErrorKind::InvalidParameter, "theta grid resolution must be >= 64");
  if (J.offsets.empty()) throw Error(ErrorKind::InvalidParameter, "empty step distribution");
  const int h = grid_resolution / 2;
  double best = 1e300, b1 = 0, b2 = 0;
  for (int i = 0; i <= h; ++i)
    for (int k = 0; k <= h; ++k) {
      if (i == 0 && k == 0) continue;
      double p1 = 2.0 * kPi * i / grid_resolution, p2 = 2.0 * kPi * k / grid_resolution;
      double r = ratio(J, p1, p2);
      if (r < best) best = r, b1 = p1, b2 = p2;
    }
  double step = 2.0 * kPi / grid_resolution;
  for (int it = 0; it < 40; ++it) {
    double c1 = b1, c2 = b2;
    for (int a = -2; a <= 2; ++a)
      for (int b = -2; b <= 2; ++b) {
        double p1 = std::clamp(c1 + a * step / 2, 0.0, kPi), p2 = std::clamp(c2 + b * step / 2, 0.0, kPi);
        if (p1 == 0.0 && p2 == 0.0) continue;
        double r = ratio(J, p1, p2);
        if (r < best) best = r, b1 = p1, b2 = p2;
      }
    step /= 2;
  }
  // Approach to p = 0, where the ratio tends to v2 |p|^2 / lambda(p).
  for (int d = 0; d <= 16; ++d) {
    double phi = 0.5 * kPi * d / 16;
    double r = ratio(J, 1e-5 * std::cos(phi), 1e-5 * std::sin(phi));
    best = std::min(best, r);
  }
  if (!(best > 0.0)) throw Error(ErrorKind::InvalidParameter, "degenerate step distribution");
  return best;
}

const std::vector<Offset>& unit_directions() {
  static const std::vector<Offset> dirs = {Offset(1, 0), Offset(0, 1), Offset(-1, 0), Offset(0, -1)};
  return dirs;
}

Field shift(const Field& f, int d1, int d2) {
  const long n1 = f.rows(), n2 = f.cols();
  Field out(n1, n2);
  for (long j = 0; j < n2; ++j) {
    long jj = ((j + d2) % n2 + n2) % n2;
    for (long i = 0; i < n1; ++i) out(i, j) = f(((i + d1) % n1 + n1) % n1, jj);
  }
  return out;
}

Field forward_difference(const Field& f, const Offset& mu) { return shift(f, mu(0), mu(1)) - f; }

Field laplacian(const Field& f) {
  Field out = Field::Zero(f.rows(), f.cols());
  for (const auto& e : unit_directions()) out += forward_difference(f, e);
  return out;
}

Field laplacian_J(const StepDistribution& J, const Field& f) {
  Field out = Field::Zero(f.rows(), f.cols());
  for (const auto& x : J.offsets) out += forward_difference(f, x);
  return out / double(J.size());
}

double inner(const Field& f, const Field& g) { return f.cwiseProduct(g).sum(); }

double gradient_inner(const Field& f, const Field& g) {
  double acc = 0.0;
  for (const auto& e : unit_directions()) acc += inner(forward_difference(f, e), forward_difference(g, e));
  return 0.5 * acc;
}

}  // namespace dglab
