#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dglab/bump.hpp"
#include "dglab/common.hpp"
#include "dglab/potential.hpp"

using namespace dglab;
using doctest::Approx;

namespace {
const double g = default_profile()->gamma();
}

TEST_CASE("z-tilde coefficients against 60-digit quadrature") {
  // tests/oracles: mpmath, (2/pi) int_0^pi log F cos(q phi)
  const std::vector<double> z20{9.0799859712122163e-5, -2.0611536224385578e-9, 6.2384153125601164e-14,
                                -2.1241771276457945e-18};
  const std::vector<double> z40{4.1223072448771157e-9, -4.248354255291589e-18, 5.8376738417976802e-27,
                                -9.0242569392270759e-36};
  PotentialCoefficients a = tilde_z_coefficients(20.0 / g, g, 10), b = tilde_z_coefficients(40.0 / g, g, 10);
  for (int q = 0; q < 4; ++q) {
    CHECK(a.z_tilde[q] == Approx(z20[q]).epsilon(1e-12));
    CHECK(b.z_tilde[q] == Approx(z40[q]).epsilon(1e-12));
  }
  CHECK(b.z_tilde[0] == Approx(2.0 * std::exp(-20.0)).epsilon(1e-8));
  CHECK(a.c_f == Approx(g / 4.0));
  CHECK_FALSE(a.below_threshold);
}

TEST_CASE("z-tilde bound and symmetry") {
  for (double gb : {20.0, 25.0, 33.0}) {
    PotentialCoefficients c = tilde_z_coefficients(gb / g, g, 10);
    for (int q = 1; q <= 10; ++q) CHECK(std::abs(c.z_tilde[q - 1]) <= tilde_z_bound(gb, q));
    CHECK(c.sine_max[0] <= 10.0 * c.dft_floor);
    CHECK(c.min_F > 0.0);
  }
  CHECK(tilde_z_coefficients(1.0 / g, g, 4).below_threshold);
  CHECK(smoothed_F(0.3, 20.0) == Approx(1.0 + 2.0 * std::exp(-10.0) * std::cos(0.3)).epsilon(1e-12));
}

TEST_CASE("C and C-tilde mode formulas") {
  StepDistribution J = nearest_neighbour();
  const double m2 = 0.3;
  for (auto [p1, p2] : {std::pair{0.4, 1.1}, {3.0, 0.1}, {kPi, kPi}}) {
    double lj = lambda_J_at(J, p1, p2);
    CHECK(covariance_C_mode(J, g, 0.0, m2, p1, p2) == Approx(1.0 / (lj + m2) - g).epsilon(1e-14));
    CHECK(covariance_Ctilde_mode(J, g, 0.0, m2, p1, p2) == Approx(1.0 / (lj + m2)).epsilon(1e-13));
  }
  for (double s : {0.0, 0.1, -0.1}) {
    CHECK(covariance_C_mode(J, g, s, m2, 0.0, 0.0) == Approx(1.0 / m2 - g).epsilon(1e-14));
    CHECK(covariance_Ctilde_mode(J, g, s, m2, 0.0, 0.0) == Approx(1.0 / m2).epsilon(1e-14));
  }
  for (double s : {0.9 * 0.25, -0.9 * 0.25})
    for (double p1 = 0.05; p1 < kPi; p1 += 0.3)
      for (double p2 = 0.0; p2 < kPi; p2 += 0.3) CHECK(covariance_C_mode(J, g, s, 0.01, p1, p2) > 0.0);
}

TEST_CASE("test function embedding") {
  StepDistribution J = nearest_neighbour();
  TestFunction f{{1, 0, 1.0, 0.0}};
  CHECK(continuum_green_form(f) == Approx(1.0 / (8.0 * kPi * kPi)).epsilon(1e-15));
  // tests/oracles: numpy FFT of f_N, v^2 (f_N, (-Delta_J)^-1 f_N)
  const double oracle[] = {0.012675325385495154, 0.012665783757321091, 0.01266518769177429, 0.012665150438489132};
  for (int N = 3; N <= 6; ++N) {
    TestFunctionEmbedding e = embed_test_function(f, TorusGeometry(4, N), J, g, 0.0, 0.0);
    CHECK(J.v2 * e.green_form == Approx(oracle[N - 3]).epsilon(1e-12));
    if (N <= 4) CHECK(std::abs(e.f_sum) < 1e-12);
  }
  // (f_N, C-tilde f_N) -> (f, (-Delta)^-1 f) / (s + v^2)
  const double s = 0.05;
  TestFunctionEmbedding e = embed_test_function(f, TorusGeometry(4, 6), J, g, s, 1e-9);
  CHECK(e.ctilde_form == Approx(continuum_green_form(f) / (s + J.v2)).epsilon(1e-3));
}

TEST_CASE("small torus matrices") {
  Eigen::MatrixXd A = laplacian_matrix_J(nearest_neighbour(), 2, 1);
  // (sigma, -Delta_J sigma) = (s0 - s1)^2 / 2 on the 2 x 1 torus
  Eigen::Vector2d v(1.3, -0.4);
  CHECK(v.dot(A * v) == Approx(0.5 * 1.7 * 1.7).epsilon(1e-14));
  CHECK((laplacian_matrix(4, 4) - 4.0 * laplacian_matrix_J(nearest_neighbour(), 4, 4)).norm() < 1e-14);
}

TEST_CASE("Gauss-Hermite rule against numpy") {
  GaussHermite r = gauss_hermite(5);
  const double x[] = {-2.8569700138728056, -1.355626179974266, 0.0, 1.355626179974266, 2.8569700138728056};
  const double w[] = {0.011257411327720677, 0.22207592200561257, 0.5333333333333335, 0.22207592200561257,
                      0.011257411327720677};
  for (int i = 0; i < 5; ++i) {
    CHECK(r.x(i) == Approx(x[i]).epsilon(1e-13));
    CHECK(r.w(i) == Approx(w[i]).epsilon(1e-13));
  }
}

TEST_CASE("reformulation identity on tiny tori") {
  StepDistribution J = nearest_neighbour();
  ReformulationResult z = reformulation_check(J, 2, 1, 50.0, g, 0.0, 0.5, Eigen::VectorXd::Zero(2));
  CHECK(z.lhs_ratio == Approx(1.0).epsilon(1e-14));
  CHECK(z.rhs_ratio == Approx(1.0).epsilon(1e-14));
  Eigen::VectorXd f(2);
  f << 0.2, -0.2;
  ReformulationResult a = reformulation_check(J, 2, 1, 50.0, g, 0.0, 0.5, f);
  CHECK(std::abs(a.rhs_ratio / a.lhs_ratio - 1.0) < 1e-6);
  Eigen::VectorXd f4(4);
  f4 << 0.25, -0.1, 0.05, -0.2;
  ReformulationResult b = reformulation_check(J, 2, 2, 50.0, g, 0.02, 0.5, f4);
  CHECK(std::abs(b.rhs_ratio / b.lhs_ratio - 1.0) < 1e-6);
  CHECK(b.rhs_change < 1e-7);
}
