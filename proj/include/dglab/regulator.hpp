#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "dglab/geometry.hpp"
#include "dglab/lattice.hpp"

namespace dglab {

// Calibrated so that E[G_j] over one block of Gamma_2 (L = 4, rho = 1) is about 1.3.
inline constexpr double kCalibratedCKappa = 4.6e-5;

struct RegulatorParams {
  double c1 = 1.0;
  double c2 = 0.01;
  double c_w = 0.01;
  double kappa_L = 0.0;

  // kappa_L = c_kappa rho^2 / log L
  static RegulatorParams make(double c_kappa, int rho, int L, double c2 = 0.01, double c_w = 0.01);
};

// Blocks of X have side L^j on the torus of phi; X.n * L^j must equal phi.rows().
struct RegulatorTerms {
  double bulk = 0.0;      // ||nabla_j phi||^2_{L^2_j(X)}
  double boundary = 0.0;  // ||nabla_j phi||^2_{L^2_j(dX)}
  double W2 = 0.0;        // W_j(X, nabla_j^2 phi)^2
  double w2 = 0.0;        // w_j(X, phi)^2
};
RegulatorTerms regulator_terms(const Field& phi, const Polymer& X, int L);
// Same with phi given on a patch whose (0, 0) entry sits at torus site (x0, y0); the patch must
// cover X* plus a 2-site collar.
RegulatorTerms regulator_terms_patch(const Field& patch, long x0, long y0, const Polymer& X, int L);
// Precomputed stencils for repeated evaluation on fields sharing one patch layout (column-major).
class RegulatorEvaluator {
 public:
  RegulatorEvaluator(const Polymer& X, int L, long rows, long cols, long x0, long y0);
  RegulatorTerms terms(const double* field) const;
  double log_G(const double* field, const RegulatorParams& p) const;
  long rows() const { return rows_; }
  long cols() const { return cols_; }

 private:
  long rows_, cols_;
  double s1_ = 1.0;
  std::vector<std::array<int, 5>> bulk_, boundary_;
  std::vector<std::array<int, 21>> stencil_;
  std::vector<std::vector<int>> blocks_;
};
double regulator_log_G_patch(const Field& patch, long x0, long y0, const Polymer& X, int L, const RegulatorParams& p);
double regulator_log_G(const Field& phi, const Polymer& X, int L, const RegulatorParams& p);
double regulator_G(const Field& phi, const Polymer& X, int L, const RegulatorParams& p);
double w_j_squared(const Field& phi, const Polymer& X, int L);

// Sites of X (and of its inner vertex boundary) as (x1, x2) pairs.
std::vector<std::pair<long, long>> polymer_sites(const Polymer& X, long block_side);
std::vector<std::pair<long, long>> inner_boundary(const Polymer& X, long block_side);

}  // namespace dglab
