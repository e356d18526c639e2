#include "dglab/rgflow.hpp"

#include <cmath>

namespace dglab {

double CouplingState::norm(double c_f, double beta) const {
  double n = std::abs(s);
  for (std::size_t q = 0; q < z.size(); ++q) n = std::max(n, std::exp(c_f * beta * double(q + 1)) * std::abs(z[q]));
  return n;
}

double beta_free(const StepDistribution& J) { return 8.0 * kPi * J.v2; }
double beta_eff(const StepDistribution& J, double beta, double s) { return beta / (1.0 + s / J.v2); }

double charge_integral(int q, double beta, double gamma0) { return std::exp(-0.5 * beta * double(q) * q * gamma0); }

CouplingState step_couplings(const CouplingState& u, double beta, int L, const std::optional<GammaData>& g) {
  if (!g) throw Error(ErrorKind::Dependency, "covariance data missing for scale " + std::to_string(u.j));
  CouplingState v = u;
  const double L2 = double(L) * L;
  for (std::size_t q = 0; q < v.z.size(); ++q) v.z[q] *= L2 * charge_integral(int(q + 1), beta, g->g0);
  v.E = u.E - u.s * g->grad2();
  v.j = u.j + 1;
  return v;
}

double h_parameter(double c_f, double r, double c_h, double rho, double beta) {
  return std::max({std::sqrt(c_f), r * c_h * std::sqrt(beta) / (rho * rho), 1.0 / rho});
}

double alpha_loc(int L, double beta, double h, double r, double gamma0, double C) {
  const double lL = std::log(double(L));
  double head = std::pow(double(L), -3.0) * std::pow(lL, 1.5);
  const double sb = std::sqrt(beta);
  double series = 0.0;
  if (sb * h >= r * beta * gamma0) {
    series = 1.0;  // terms do not decay
  } else {
    for (int q = 1; q < 1000000; ++q) {
      double t = std::exp(sb * q * h - (q - 0.5) * r * beta * gamma0);
      series += t;
      if (t < 1e-16 * series || series >= 1.0) break;
    }
  }
  return C * head + C * std::min(1.0, series);
}

int critical_scale_j0(const StepDistribution& J, const std::vector<GammaData>& gammas, int L, double delta,
                      double beta, double r, double s) {
  if (r * beta_eff(J, beta, s) < (1.0 + delta) * beta_free(J))
    throw Error(ErrorKind::Subcritical, "r beta_eff < (1 + delta) beta_free");
  const double L2 = double(L) * L, bound = std::pow(double(L), -delta);
  int j0 = -1;
  for (int j = int(gammas.size()) - 1; j >= 0; --j) {
    if (L2 * std::exp(-0.5 * r * beta * gammas[j].g0) <= bound)
      j0 = j;
    else
      break;
  }
  return j0;
}

std::vector<GammaData> flow_gamma_table(const FiniteRangeDecomposition& F, int L, int scales, int exact_max_j,
                                        const InfiniteVolumeOptions& opt) {
  std::vector<GammaData> out(scales);
  std::optional<FiniteRangeDecomposition> F0;
  for (int j = 0; j < scales; ++j) {
    if (F.s() == 0.0 || j <= exact_max_j) {
      ScaleValues v = infinite_volume_scale(F, L, j, opt);
      out[j] = {v.g0, v.ge1};
    } else {
      if (!F0) F0.emplace(F.profile_ptr(), F.J(), 0.0, F.m2(), F.options());
      ScaleValues v = infinite_volume_scale(*F0, L, j, opt);
      double c = F.J().v2 / (F.J().v2 + F.s());
      out[j] = {c * v.g0, c * v.ge1};
    }
  }
  return out;
}

FlowResult run_flow(const CouplingState& initial, const StepDistribution& J, const std::vector<GammaData>& gammas,
                    const FlowParams& p) {
  FlowResult res;
  res.beta_free = beta_free(J);
  res.beta_eff = beta_eff(J, p.beta, initial.s);
  try {
    res.j0 = critical_scale_j0(J, gammas, p.L, p.delta, p.beta, p.r, initial.s);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Subcritical) throw;
    res.j0 = -1;
  }
  const double h = h_parameter(p.c_f, p.r, p.c_h, double(J.rho), p.beta);
  res.trajectory.push_back(initial);
  const int N = int(gammas.size());
  for (int j = 0; j < N; ++j) {
    const CouplingState& u = res.trajectory.back();
    FlowScale sc;
    sc.j = j;
    sc.gamma = gammas[j];
    sc.factor = double(p.L) * p.L * charge_integral(1, p.beta, gammas[j].g0);
    sc.alpha_loc = alpha_loc(p.L, p.beta, h, p.r, gammas[j].g0, p.C_loc);
    sc.norm = u.norm(p.c_f, p.beta);
    res.scales.push_back(sc);
    res.trajectory.push_back(step_couplings(u, p.beta, p.L, gammas[j]));
  }
  std::vector<double> norms;
  for (const auto& u : res.trajectory) norms.push_back(u.norm(p.c_f, p.beta));

  const int start = std::max(res.j0, 0);
  int growth = 0;
  for (int j = start + 1; j <= N; ++j) {
    growth = norms[j] > norms[j - 1] ? growth + 1 : 0;
    if (growth >= 3 && !res.diverged) {
      res.diverged = true;
      res.divergence_scale = j;
    }
  }
  if (res.j0 >= 0) {
    res.contracting = true;
    for (int j = res.j0 + 1; j <= N; ++j) res.contracting = res.contracting && norms[j] < norms[j - 1];
    // least squares of log ||U_j|| against j over j > j0
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int j = res.j0 + 1; j <= N; ++j) {
      if (!(norms[j] > 0.0)) continue;
      double y = std::log(norms[j]);
      sx += j;
      sy += y;
      sxx += double(j) * j;
      sxy += j * y;
      ++n;
    }
    if (n >= 2) res.alpha = -((n * sxy - sx * sy) / (n * sxx - sx * sx)) / std::log(double(p.L));
  }
  return res;
}

}  // namespace dglab
