#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dglab/common.hpp"
#include "dglab/lattice.hpp"

using namespace dglab;
using doctest::Approx;

TEST_CASE("standard_range_rho: offsets, rho and v2") {
  StepDistribution J1 = standard_range_rho(1);
  CHECK(J1.size() == 8);
  CHECK(J1.rho == 1);
  CHECK(J1.v2 == Approx(3.0 / 8.0).epsilon(1e-15));
  StepDistribution J3 = standard_range_rho(3);
  CHECK(J3.rho == 3);
  CHECK(J3.size() == 48);
  // oracle: exact fractions, tests/oracles
  CHECK(standard_range_rho(2).v2 == Approx(25.0 / 24.0).epsilon(1e-15));
  CHECK(nearest_neighbour().v2 == Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(standard_range_rho(0), Error);
}

TEST_CASE("multiplier_lambda: values and the quadratic sandwich") {
  CHECK(lambda_at(0.0, 0.0) == 0.0);
  CHECK(lambda_at(kPi, kPi) == Approx(8.0).epsilon(1e-15));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int i = 0; i < 2000; ++i) {
    double p1 = u(rng), p2 = u(rng), p = p1 * p1 + p2 * p2;
    double l = lambda_at(p1, p2);
    CHECK(l >= 4.0 * p / (kPi * kPi) - 1e-14);
    CHECK(l <= p + 1e-14);
  }
}

TEST_CASE("multiplier_lambda_J: nn normalisation and small-p expansion") {
  StepDistribution nn = nearest_neighbour(), J2 = standard_range_rho(2);
  CHECK(lambda_J_at(nn, 0.0, 0.0) == 0.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int i = 0; i < 200; ++i) {
    double p1 = u(rng), p2 = u(rng);
    CHECK(lambda_J_at(nn, p1, p2) == Approx(lambda_at(p1, p2) / 4.0).epsilon(1e-13));
  }
  for (double eps : {1e-2, 5e-3, 2.5e-3}) {
    double p1 = 0.6 * eps, p2 = 0.8 * eps;
    double rem = lambda_J_at(J2, p1, p2) - J2.v2 * eps * eps;
    // O(rho^2 v^2 |p|^4)
    CHECK(std::abs(rem) <= 4.0 * J2.v2 * std::pow(eps, 4.0));
  }
}

TEST_CASE("spectral_theta") {
  CHECK(spectral_theta(nearest_neighbour()) == Approx(0.25).epsilon(1e-12));
  for (int rho : {1, 2, 3}) CHECK(spectral_theta(standard_range_rho(rho)) >= 1.0 / 9.0);
  // oracle: exhaustive 4096^2 grid minimisation (tests/oracles)
  CHECK(spectral_theta(standard_range_rho(2), 4096) == Approx(0.125).epsilon(1e-12));
  CHECK(spectral_theta(standard_range_rho(1)) == Approx(0.125).epsilon(1e-12));
}

TEST_CASE("make_step_distribution rejects asymmetric sets") {
  CHECK_THROWS_AS(make_step_distribution({Offset(1, 0)}), Error);
}

TEST_CASE("laplacian_J is diagonal in the torus Fourier basis") {
  const long R = 16;
  StepDistribution J = standard_range_rho(2);
  for (auto [k1, k2] : {std::pair{1L, 0L}, {3L, 5L}, {8L, 8L}}) {
    Field f(R, R);
    for (long x = 0; x < R; ++x)
      for (long y = 0; y < R; ++y) f(x, y) = std::cos(2.0 * kPi * double(k1 * x + k2 * y) / double(R));
    Field g = laplacian_J(J, f);
    double lam = torus_lambda_J(J, k1, k2, R);
    CHECK((g + lam * f).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((laplacian(f) + torus_lambda(k1, k2, R) * f).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("summation by parts") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n;
  Field f(8, 8), g(8, 8);
  for (long i = 0; i < 64; ++i) f(i) = n(rng), g(i) = n(rng);
  CHECK(gradient_inner(f, g) == Approx(-inner(f, laplacian(g))).epsilon(1e-12));
}
