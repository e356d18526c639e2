#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dglab/bump.hpp"
#include "dglab/common.hpp"
#include "dglab/covariance.hpp"

using namespace dglab;
using doctest::Approx;

namespace {
FiniteRangeDecomposition frd(double s, double m2, int rho = 1) {
  return FiniteRangeDecomposition(default_profile(), rho == 1 ? nearest_neighbour() : standard_range_rho(rho), s, m2);
}
}  // namespace

TEST_CASE("scale covariance has finite range") {
  for (double s : {0.0, 0.02}) {
    FiniteRangeDecomposition F = frd(s, 0.1);
    for (int j = 1; j <= 2; ++j) {
      ScaleCovariance G = scale_covariance(F, 4, j);
      CHECK(G.R == 4 * long(std::pow(4, j + 1)));
      double g0 = G.at(0, 0);
      if (g0 > 0.0) CHECK(G.max_outside(scale_bound(4, j + 1)) < 1e-8 * g0);
      CHECK(G.at(1, 0) <= g0);
    }
  }
}

TEST_CASE("Gamma_{j+1}(0,0) approaches log L / (2 pi (v^2 + s))") {
  FiniteRangeDecomposition F = frd(0.0, 0.0);
  double prev = 1.0;
  for (int j = 2; j <= 4; ++j) {
    ScaleValues v = infinite_volume_scale(F, 16, j);
    double dev = std::abs(2.0 * kPi * 0.25 * v.g0 / std::log(16.0) - 1.0);
    CHECK(dev < 1e-3);
    CHECK(dev <= prev + 1e-6);
    prev = dev;
  }
}

TEST_CASE("infinite volume quadrature matches the large torus") {
  FiniteRangeDecomposition F = frd(0.0, 0.0);
  ScaleCovariance G = scale_covariance(F, 4, 2);
  ScaleValues v = infinite_volume_scale(F, 4, 2);
  CHECK(v.g0 == Approx(G.at(0, 0)).epsilon(1e-8));
  CHECK(v.ge1 == Approx(G.at(1, 0)).epsilon(1e-8));
}

TEST_CASE("gradient bound |nabla Gamma_{j+1}| <= C rho^-2 L^-j") {
  FiniteRangeDecomposition F = frd(0.0, 0.0);
  std::vector<double> C;
  for (int j = 1; j <= 3; ++j) {
    ScaleCovariance G = scale_covariance(F, 4, j);
    double m = 0.0;
    for (long a = 0; a < G.R; ++a)
      for (long b = 0; b < G.R; ++b) m = std::max(m, std::abs(G.position((a + 1) % G.R, b) - G.position(a, b)));
    C.push_back(m * std::pow(4.0, j));
  }
  // fitted constant ~6.5, uniform in j once the window clears rho
  for (double c : C) CHECK(c < 7.0);
  CHECK(C[2] == Approx(C[1]).epsilon(0.05));
}

TEST_CASE("torus decomposition sums to C_hat(s, m2)") {
  for (double s : {0.0, -0.02}) {
    TorusDecomposition d = torus_decomposition(frd(s, 0.5, 2), 4, 3);
    CHECK(d.max_rel_residual < 1e-10);
    CHECK(d.min_hat > -1e-12);
    REQUIRE(d.has_zero_mode);
    CHECK(d.zero.t_N < 1.0 / 0.5);
    CHECK(d.zero.t_N == Approx(d.zero.t_N_trapezoid).epsilon(1e-6));
  }
}

TEST_CASE("zero mode: p = 0 contribution is the constant matrix 1/|Lambda|") {
  Eigen::MatrixXd hat = Eigen::MatrixXd::Zero(8, 8);
  hat(0, 0) = 1.0;
  Eigen::MatrixXd pos = position_from_hat(hat);
  CHECK((pos.array() - 1.0 / 64.0).abs().maxCoeff() < 1e-16);
  CHECK_THROWS_AS(zero_mode(frd(0.0, 0.0), 4, 3), Error);
}

TEST_CASE("fractional covariances") {
  FiniteRangeDecomposition F = frd(0.0, 0.2);
  ScaleCovariance whole = scale_covariance(F, 4, 2, 256);
  ScaleCovariance one = fractional_covariance(F, 4, 1, 2, 0, 256);
  CHECK((one.hat - whole.hat).cwiseAbs().maxCoeff() < 1e-14);
  ScaleCovariance a = fractional_covariance(F, 4, 2, 2, 0, 256), b = fractional_covariance(F, 4, 2, 2, 1, 256);
  CHECK((a.hat + b.hat - whole.hat).cwiseAbs().maxCoeff() < 1e-12);
  // sup |Gamma_{j+s, j+s'}| <= C0 rho^-2 (1 + log ell), ell = 2
  double C0 = std::max(a.position.cwiseAbs().maxCoeff(), b.position.cwiseAbs().maxCoeff()) / (1.0 + std::log(2.0));
  CHECK(C0 < 1.0);
  CHECK_THROWS_AS(fractional_covariance(F, 8, 2, 1, 0), Error);
}
