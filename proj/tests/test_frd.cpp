#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dglab/bump.hpp"
#include "dglab/common.hpp"
#include "dglab/covariance.hpp"
#include "dglab/frd.hpp"

using namespace dglab;
using doctest::Approx;

TEST_CASE("mode kernel at s = 0 is rho^-2 t P_{t/rho}") {
  const BumpProfile& b = *default_profile();
  for (int rho : {1, 2}) {
    StepDistribution J = rho == 1 ? nearest_neighbour() : standard_range_rho(2);
    FiniteRangeDecomposition F(default_profile(), J, 0.0, 0.3);
    for (double lamp : {0.31, 1.2, 2.9})
      for (double t : {1.5 * rho, 3.7 * rho, 11.0 * rho})
        CHECK(F.density(t, 0.0, lamp) == Approx(t * b.P_t(t / rho, lamp) / (rho * rho)).epsilon(1e-9));
    CHECK(F.density(0.5 * rho, 0.0, 1.0) == 0.0);
  }
}

TEST_CASE("mode kernel at s != 0: vanishes below 5 rho, nonnegative, bounded") {
  StepDistribution J = nearest_neighbour();
  FiniteRangeDecomposition F(default_profile(), J, 0.02, 0.1);
  const double lam = lambda_at(0.7, 0.2), lamp = lambda_J_at(J, 0.7, 0.2) + 0.1;
  CHECK(F.density(3.0, lam, lamp) == 0.0);
  std::vector<double> ts;
  auto d = F.density_profile(lam, lamp, 80.0, &ts);
  double envelope = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (ts[i] <= 5.0) CHECK(std::abs(d[i]) < 1e-15);
    CHECK(d[i] >= -1e-15);
    if (ts[i] > 5.0) envelope = std::max(envelope, d[i] / (ts[i] * std::exp(-0.5 * std::pow(std::sqrt(lamp) * ts[i], 0.25))));
  }
  // fitted envelope constant C~ with c~ = 1/2
  CHECK(envelope < 1.0);
}

TEST_CASE("spectral and spatial routes agree") {
  FiniteRangeDecomposition F(default_profile(), standard_range_rho(2), 0.0, 0.2);
  for (double lamp : {0.25, 1.7})
    for (auto [a, b] : {std::pair{2.0, 8.0}, {8.0, 32.0}, {3.5, 4.25}})
      CHECK(F.base_window_spectral(a, b, lamp) == Approx(F.base_window_spatial(a, b, lamp)).epsilon(1e-11));
}

TEST_CASE("total mass reproduces C_hat(s, m2)") {
  StepDistribution J = nearest_neighbour();
  for (double s : {0.0, 0.02, -0.02}) {
    FiniteRangeDecomposition F(default_profile(), J, s, 0.5);
    const double p1 = 1.1, p2 = 0.4, lam = lambda_at(p1, p2), lamp = lambda_J_at(J, p1, p2) + 0.5;
    ModeWindows w = F.mode_windows(lam, lamp, {0.0, 4.0, 16.0, 64.0});
    double sum = w.tail;
    for (double v : w.windows) sum += v;
    CHECK(sum == Approx(F.C_hat(lam, lamp)).epsilon(1e-9));
  }
}

TEST_CASE("guards") {
  CHECK_THROWS_AS(FiniteRangeDecomposition(default_profile(), nearest_neighbour(), 0.3, 0.1), Error);
  CHECK_THROWS_AS(FiniteRangeDecomposition(default_profile(), nearest_neighbour(), 0.0, 1.5), Error);
  FrdOptions o;
  o.cell_width = 0.3;
  CHECK_THROWS_AS(FiniteRangeDecomposition(default_profile(), nearest_neighbour(), 0.0, 0.1, o), Error);
}
