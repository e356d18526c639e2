#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dglab/bump.hpp"
#include "dglab/common.hpp"
#include "dglab/quadrature.hpp"

using namespace dglab;
using doctest::Approx;

TEST_CASE("bump profile constants against the numpy oracle") {
  const BumpProfile& b = *default_profile();
  // tests/oracles: 4000-point Gauss-Legendre transform, 32-point panels to x = 512
  CHECK(b.gamma() == Approx(0.11812786456701883).epsilon(1e-9));
  CHECK(b.c() == Approx(1.7752093729533611).epsilon(1e-9));
  CHECK(b.kappa_hat(0.0) == Approx(0.22199690808403794).epsilon(1e-12));
  CHECK(b.gamma_from_periodisation() == Approx(b.gamma()).epsilon(1e-9));
  CHECK(b.spectral_normalisation() == Approx(1.0).epsilon(1e-9));
}

TEST_CASE("kappa_hat: positive at 0, even, stretched-exponential decay") {
  const BumpProfile& b = *default_profile();
  CHECK(b.kappa_hat(0.0) > 0.0);
  for (double x : {0.3, 2.5, 17.0, 101.25}) CHECK(b.kappa_hat(-x) == b.kappa_hat(x));
  for (double x : {1.0, 7.3, 40.1}) CHECK(b.kappa_hat(x) == Approx(b.kappa_hat_direct(x)).epsilon(1e-10));
  double sup = 0.0;
  for (double x = 5.0; x <= 50.0; x += 0.25) sup = std::max(sup, std::abs(b.kappa_hat(x)) * std::exp(std::sqrt(x)));
  // fitted envelope constant: sup ~ 1.2146 on [5, 50]
  CHECK(sup == Approx(1.21455).epsilon(1e-4));
  CHECK(std::abs(b.kappa_hat(200.0)) * std::exp(std::sqrt(200.0)) < 2.0 * sup);
}

TEST_CASE("P_t: constant regime, positivity and decay") {
  const BumpProfile& b = *default_profile();
  for (double lam : {0.1, 1.0, 3.0}) CHECK(b.P_t(0.5, lam) == Approx(2.0 * b.gamma()).epsilon(1e-14));
  double v = b.P_t(4.0, 1.0);
  CHECK(v >= 0.0);
  CHECK(v <= 2.0 * b.gamma() * std::exp(-0.5 * std::pow(16.0, 0.25)) * 10.0);
  for (double t : {1.5, 3.0, 9.0}) CHECK(b.P_t(t, 0.7) == Approx(b.P_t_chebyshev(t, 0.7)).epsilon(1e-10));
  CHECK_THROWS_AS(b.P_t(1.0, 0.0), Error);
  CHECK_THROWS_AS(b.P_t(0.0, 1.0), Error);
}

TEST_CASE("P_t reconstructs 1/lambda") {
  const BumpProfile& b = *default_profile();
  GaussRule g = gauss_legendre(16);
  for (double lam : {0.5, 1.0, 2.0}) {
    double acc = 0.0;
    for (int i = 0; i < 2000; ++i) acc += integrate(g, 0.1 * i, 0.1 * (i + 1), [&](double t) { return t * b.P_t(t, lam); });
    CHECK(std::abs(lam * acc - 1.0) < 1e-4);
  }
}
