#pragma once

#include <optional>
#include <vector>

#include "dglab/covariance.hpp"

namespace dglab {

struct CouplingState {
  int j = 0;
  double E = 0.0;
  double s = 0.0;
  std::vector<double> z;  // index q - 1

  // max{|s|, sup_q e^{c_f beta q} |z_q|}
  double norm(double c_f, double beta) const;
};

// Gamma_{j+1}(0) and Gamma_{j+1}(e1) for one scale.
struct GammaData {
  double g0 = 0.0, ge1 = 0.0;
  double grad2() const { return 2.0 * (g0 - ge1); }  // nabla^{(e1,-e1)} Gamma(0)
};

double beta_free(const StepDistribution& J);                       // 8 pi v^2
double beta_eff(const StepDistribution& J, double beta, double s);  // beta / (1 + s / v^2)

double charge_integral(int q, double beta, double gamma0);
CouplingState step_couplings(const CouplingState& u, double beta, int L, const std::optional<GammaData>& g);

double h_parameter(double c_f, double r, double c_h, double rho, double beta);
double alpha_loc(int L, double beta, double h, double r, double gamma0, double C = 1.0);

// Smallest j with L^2 exp(-r beta Gamma_{j+1}(0) / 2) <= L^-delta holding for every later tabulated j;
// -1 if none.
int critical_scale_j0(const StepDistribution& J, const std::vector<GammaData>& gammas, int L, double delta,
                      double beta, double r, double s);

// Gamma_{j+1} for j = 0..scales-1 in infinite volume. For s != 0 scales above exact_max_j are
// obtained from the s = 0 values scaled by v^2 / (v^2 + s).
std::vector<GammaData> flow_gamma_table(const FiniteRangeDecomposition& F, int L, int scales, int exact_max_j = 1000,
                                        const InfiniteVolumeOptions& opt = {});

struct FlowParams {
  double beta = 0.0;
  int L = 8;
  double r = 1.0;
  double delta = 0.5;
  double c_h = 0.1;
  double C_loc = 1.0;
  double c_f = 0.0;  // gamma / 4
};

struct FlowScale {
  int j = 0;
  GammaData gamma;
  double factor = 0.0;  // L^2 exp(-beta Gamma_{j+1}(0) / 2), q = 1
  double alpha_loc = 0.0;
  double norm = 0.0;    // ||U_j||
};

struct FlowResult {
  std::vector<CouplingState> trajectory;  // j = 0..N
  std::vector<FlowScale> scales;          // j = 0..N-1
  int j0 = -1;
  bool diverged = false;
  int divergence_scale = -1;
  bool contracting = false;  // ||U_j|| strictly decreasing for j0 < j <= N
  double alpha = 0.0;        // fitted from log ||U_j|| over j > j0
  double beta_free = 0.0, beta_eff = 0.0;
};

FlowResult run_flow(const CouplingState& initial, const StepDistribution& J, const std::vector<GammaData>& gammas,
                    const FlowParams& p);

}  // namespace dglab
