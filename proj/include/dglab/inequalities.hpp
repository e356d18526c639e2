#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "dglab/lattice.hpp"

namespace dglab {

struct Sides {
  double lhs = 0.0, rhs = 0.0;
  double ratio() const { return rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? kInf() : 0.0); }
  static double kInf() { return std::numeric_limits<double>::infinity(); }
};

// u given on {0..R+1}^2: the block B = {1..R}^2 plus its outer boundary lines.
// k in 1..4 selects l_k and mu_k as (1,-e1), (2,e2), (3,e1), (4,-e2). Holds with constant 1.
Sides trace_sides(const Field& u, int k);

// f given on {0..R+3}^2: B = {2..R+1}^2 plus a 2-site collar.
// lhs = max_B f^2, rhs = sum_a R^{2a-2} sum_B sum_{mu in e^a} |nabla^mu f|^2 (a = 0, 1, 2).
Sides sobolev_sides(const Field& f);

// lhs = E[exp(1/2 sum zeta^2)] = det(I - C)^{-1/2}, rhs = exp(Tr C); largest eigenvalue <= 1/2.
Sides quad_exp_sides(const Eigen::MatrixXd& C);

// Low-frequency random field on an n x n array (few cosine modes plus a constant).
Field random_smooth_field(long n, double wavelength, std::uint64_t seed);
// Random symmetric matrix with spectrum uniform in (0, max_eig].
Eigen::MatrixXd random_covariance(int n, double max_eig, std::uint64_t seed);

struct InequalityFuzz {
  std::vector<int> sizes;
  std::vector<double> trace_max_ratio;    // per size, max over fields and k
  std::vector<double> sobolev_max_ratio;  // per size
  double sobolev_C = 0.0;                 // single fitted constant (max over sizes)
  double quad_exp_max_ratio = 0.0;        // det side / trace side, must be <= 1
  int fields = 0, covariances = 0;
  bool trace_ok = false, sobolev_ok = false, quad_exp_ok = false;
};
InequalityFuzz fuzz_inequalities(const std::vector<int>& sizes, int fields, int covariances, std::uint64_t seed);

}  // namespace dglab
