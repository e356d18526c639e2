#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dglab/common.hpp"

namespace dglab {

using Offset = Eigen::Vector2i;
using Field = Eigen::MatrixXd;  // field(x1, x2) on a square torus

struct TorusGeometry {
  int L = 2;
  int N = 1;

  TorusGeometry() = default;
  TorusGeometry(int L_, int N_);
  long side() const;
  long volume() const { return side() * side(); }
  long wrap(long a) const {
    long s = side();
    a %= s;
    return a < 0 ? a + s : a;
  }
  // Dual index in {-ceil((R-2)/2), ..., floor(R/2)}.
  long dual_index(long k) const {
    long s = side();
    long w = wrap(k);
    return w > s / 2 ? w - s : w;
  }
};

struct StepDistribution {
  std::vector<Offset> offsets;  // sorted, lattice-symmetric
  int rho = 0;
  double v2 = 0.0;
  double theta = 0.0;
  std::string name;

  std::size_t size() const { return offsets.size(); }
};

// Validates lattice symmetry, nearest-neighbour inclusion and fills derived parameters.
StepDistribution make_step_distribution(std::vector<Offset> offsets, std::string name = "custom",
                                        int theta_resolution = 1024);
StepDistribution nearest_neighbour();
StepDistribution standard_range_rho(int rho, int theta_resolution = 1024);

double variance_v2(const std::vector<Offset>& offsets);

// 1 - cos(x) without cancellation for small x.
template <typename Scalar>
inline Scalar one_minus_cos(Scalar x) {
  using std::sin;
  Scalar h = sin(x / Scalar(2));
  return Scalar(2) * h * h;
}

template <typename Scalar>
Scalar multiplier_lambda(const Eigen::Matrix<Scalar, 2, 1>& p) {
  return Scalar(2) * (one_minus_cos(p(0)) + one_minus_cos(p(1)));
}

template <typename Scalar>
Scalar multiplier_lambda_J(const StepDistribution& J, const Eigen::Matrix<Scalar, 2, 1>& p) {
  Scalar acc(0);
  for (const auto& x : J.offsets) acc += one_minus_cos(p(0) * Scalar(x(0)) + p(1) * Scalar(x(1)));
  return acc / Scalar(J.offsets.size());
}

inline double lambda_at(double p1, double p2) { return multiplier_lambda<double>(Eigen::Vector2d(p1, p2)); }
inline double lambda_J_at(const StepDistribution& J, double p1, double p2) {
  return multiplier_lambda_J<double>(J, Eigen::Vector2d(p1, p2));
}

// Multipliers on the dual torus of side R from integer indices (exactly symmetric).
double torus_lambda(long k1, long k2, long R);
double torus_lambda_J(const StepDistribution& J, long k1, long k2, long R);

// inf over nonzero p of lambda_J / lambda: grid search, dyadic refinement, small-p limit.
double spectral_theta(const StepDistribution& J, int grid_resolution = 1024);
// Exhaustive minimum over the nonzero points of a res x res grid of (-pi, pi]^2.
double grid_min_ratio(const StepDistribution& J, int res);

// Discrete derivative nabla^mu f(x) = f(x + mu) - f(x), periodic.
Field shift(const Field& f, int d1, int d2);
Field forward_difference(const Field& f, const Offset& mu);
Field laplacian(const Field& f);                                  // unnormalised nearest-neighbour Delta
Field laplacian_J(const StepDistribution& J, const Field& f);    // normalised Delta_J
double inner(const Field& f, const Field& g);
// (nabla f, nabla g) on the whole torus with the 2^{-1} convention over the four directions.
double gradient_inner(const Field& f, const Field& g);

const std::vector<Offset>& unit_directions();  // e1, e2, -e1, -e2

}  // namespace dglab
