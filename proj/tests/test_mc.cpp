#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dglab/bump.hpp"
#include "dglab/frd.hpp"
#include "dglab/mc.hpp"
#include "dglab/potential.hpp"
#include "dglab/rgflow.hpp"

using namespace dglab;
using doctest::Approx;

namespace {
DGModel model(int lx, int ly, double beta, double m2) { return DGModel{lx, ly, nearest_neighbour(), beta, m2, false}; }
}  // namespace

TEST_CASE("conditional distribution") {
  DGModel m = model(2, 2, 30.0, 1e-4);
  HeatBath hb(m);
  SpinConfig c = hb.zero_config();
  for (auto& k : c.k) k = 3;
  auto cond = hb.conditional(c, 1);
  double total = 0.0, best = -1.0;
  long mode = 0;
  for (auto [k, p] : cond) {
    total += p;
    if (p > best) best = p, mode = k;
  }
  CHECK(total == Approx(1.0).epsilon(1e-14));
  CHECK(mode == 3);
  CHECK(hb.energy(c) == Approx(0.5 * 1e-4 * 4.0 * c.value(0) * c.value(0)).epsilon(1e-12));
}

TEST_CASE("low beta freezes the field at zero") {
  // spacing 2 pi / sqrt(beta) is huge, so every non-zero height costs exp(-O(1/beta))
  HeatBath hb(model(4, 4, 0.05, 0.1));
  SpinConfig c = hb.zero_config();
  Rng rng(3);
  for (int s = 0; s < 50; ++s) hb.sweep(c, rng);
  for (long k : c.k) CHECK(k == 0);
}

TEST_CASE("sweep kernel leaves the Gibbs measure invariant") {
  CHECK(sweep_stationarity_deviation(model(2, 1, 10.0, 0.5), 6) < 1e-10);
  CHECK(sweep_stationarity_deviation(model(2, 1, 40.0, 0.2), 16) < 1e-10);
}

TEST_CASE("brute force enumeration") {
  DGModel m = model(2, 1, 10.0, 0.5);
  CHECK(brute_force_expectation(m, [](const Eigen::VectorXd&) { return 1.0; }).value == Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(brute_force_expectation(m, [](const Eigen::VectorXd& s) { return s(0); }).value) < 1e-14);
  // tests/oracles: exact enumeration with a 40-term window in python
  auto s00 = [](const Eigen::VectorXd& s) { return s(0) * s(0); };
  auto s01 = [](const Eigen::VectorXd& s) { return s(0) * s(1); };
  CHECK(brute_force_expectation(m, s00, 12.0).value == Approx(1.2659735471297724).epsilon(1e-12));
  CHECK(brute_force_expectation(m, s01, 12.0).value == Approx(0.6329867735648863).epsilon(1e-12));

  DGModel m4 = model(2, 2, 30.0, 0.2);
  double a = brute_force_expectation(m4, s00, 8.0).value, b = brute_force_expectation(m4, s00, 12.0).value;
  CHECK(std::abs(a - b) < 1e-8);
}

TEST_CASE("chains agree with enumeration and are reproducible") {
  DGModel m = model(2, 1, 10.0, 0.5);
  ChainOptions o;
  o.sweeps = 20000;
  o.burn_in = 500;
  o.chains = 2;
  o.seed = 11;
  std::vector<std::pair<std::string, Observable>> obs{{"s0^2", [](const SpinConfig& c) { return c.value(0) * c.value(0); }}};
  auto a = run_chains(m, obs, o), b = run_chains(m, obs, o);
  CHECK(a[0].mean == b[0].mean);
  CHECK(a[0].seeds == b[0].seeds);
  CHECK(std::abs(a[0].mean - 1.2659735471297724) < 4.0 * a[0].stderr_mean);
  CHECK(a[0].n_samples == 40000);
  o.seed = 12;
  CHECK(run_chains(m, obs, o)[0].mean != a[0].mean);
}

TEST_CASE("free field form") {
  StepDistribution J = nearest_neighbour();
  Field f = Field::Zero(4, 4);
  f(0, 0) = 1.0;
  f(2, 1) = -1.0;
  Eigen::MatrixXd A = laplacian_matrix_J(J, 4, 4) + 0.3 * Eigen::MatrixXd::Identity(16, 16);
  Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(f.data(), 16);
  CHECK(free_field_form(J, 0.3, f) == Approx(v.dot(A.ldlt().solve(v))).epsilon(1e-12));
}

TEST_CASE("Gaussian sampler") {
  Eigen::MatrixXd C(3, 3);
  C << 2.0, 0.5, 0.0, 0.5, 1.0, 0.2, 0.0, 0.2, 0.5;
  GaussianSampler g(C);
  CHECK(g.rank() == 3);
  Rng rng(5);
  const long k = 200000;
  Eigen::MatrixXd X = g.sample_batch(rng, k);
  Eigen::MatrixXd emp = X * X.transpose() / double(k);
  CHECK((emp - C).cwiseAbs().maxCoeff() < 0.03);
  Eigen::MatrixXd S = Eigen::MatrixXd::Ones(2, 2);
  CHECK(GaussianSampler(S).rank() == 1);
}

TEST_CASE("charge and regulator expectations") {
  FiniteRangeDecomposition F(default_profile(), nearest_neighbour(), 0.0, 0.0);
  ScaleCovariance G = scale_covariance(F, 4, 1);
  ChargeCheck c = charge_check(G, 1, 1.0, 20000, 9);
  CHECK(c.exact > 0.0);
  CHECK(c.exact < 1.0);
  CHECK(c.within(4.0));

  Polymer X = make_polymer(1, 16, {{7, 7}});
  Field zero = Field::Zero(64, 64);
  RegulatorParams off = RegulatorParams::make(1e-14, 1, 4);
  RegulatorCheck r0 = regulator_expectation_check(X, 4, zero, G, off, 2000, 1);
  CHECK(r0.mean == Approx(1.0).epsilon(1e-6));
  RegulatorCheck r1 = regulator_expectation_check(X, 4, zero, G, RegulatorParams::make(kCalibratedCKappa, 1, 4), 4000, 1);
  CHECK(r1.mean >= 1.0);
  CHECK(r1.pass());
}
