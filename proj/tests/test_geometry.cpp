#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dglab/common.hpp"
#include "dglab/geometry.hpp"
#include "dglab/inequalities.hpp"
#include "dglab/regulator.hpp"

using namespace dglab;
using doctest::Approx;

TEST_CASE("closure") {
  Polymer X = make_polymer(1, 4, {{2, 2}});
  Polymer C = closure(X, 2);
  CHECK(C.j == 2);
  CHECK(C == make_polymer(2, 2, {{1, 1}}));
  CHECK(closure(Polymer{1, 4, {}}, 2).empty());
  // diagonal pair straddling the coarse boundary on a 2-scale 4x4 torus: brute-force intersection
  Polymer D = make_polymer(1, 4, {{1, 1}, {2, 2}});
  CHECK(closure(D, 2) == make_polymer(2, 2, {{0, 0}, {1, 1}}));
  CHECK(closure(D, 2).size() == 2);
}

TEST_CASE("components and small sets") {
  Polymer conn = make_polymer(0, 10, {{1, 1}, {1, 2}, {2, 2}});
  CHECK(components(conn).size() == 1);
  CHECK(is_connected(make_polymer(0, 10, {{1, 1}, {2, 2}})));  // corner contact
  auto two = components(make_polymer(0, 10, {{1, 1}, {3, 1}}));
  CHECK(two.size() == 2);
  CHECK(is_small_set(make_polymer(0, 10, {{4, 4}})));
  CHECK_FALSE(is_small_set(make_polymer(0, 10, {{0, 0}, {0, 1}, {0, 2}, {0, 3}, {0, 4}})));
  CHECK_FALSE(is_small_set(make_polymer(0, 10, {{1, 1}, {3, 1}})));
}

TEST_CASE("small set neighbourhood") {
  Polymer B = make_polymer(0, 20, {{10, 10}});
  Polymer S = small_set_neighborhood(B);
  CHECK(S.size() == 49);
  CHECK(S.contains(7, 7));
  CHECK(S.contains(13, 13));
  CHECK_FALSE(S.contains(14, 10));
  // brute force: union of all small sets containing the block
  Polymer U;
  U.j = 0;
  U.n = 20;
  for (const auto& P : small_sets_containing(0, 20, B.blocks[0]))
    for (long b : P.blocks) U.blocks.push_back(b);
  std::sort(U.blocks.begin(), U.blocks.end());
  U.blocks.erase(std::unique(U.blocks.begin(), U.blocks.end()), U.blocks.end());
  CHECK(U == S);
  CHECK(small_set_neighborhood(whole_torus(0, 5)) == whole_torus(0, 5));
  CHECK(small_set_neighborhood(Polymer{0, 5, {}}).empty());
}

TEST_CASE("closure preimage counts") {
  auto one = [](long n) { return make_polymer(1, n, {{0, 0}}); };
  PreimageCount a = closure_preimage_count(one(3), 2, Rational(1, 1));
  CHECK(a.lhs == Rational(15, 1));
  CHECK(a.rhs == Rational(15, 1));
  CHECK(closure_preimage_count(one(3), 2, Rational(0, 1)).lhs == Rational(0, 1));
  // oracle: (1.5^9 - 1) = 19171/512 (tests/oracles)
  PreimageCount b = closure_preimage_count(one(3), 3, Rational(1, 2));
  CHECK(b.lhs == Rational(19171, 512));
  CHECK(b.lhs == b.rhs);
  PreimageCount c = closure_preimage_count(make_polymer(1, 3, {{0, 0}, {1, 2}}), 2, Rational(1, 3));
  CHECK(c.lhs == Rational(30625, 6561));
}

TEST_CASE("setsizes margins on L = 5") {
  SetsizeReport r = setsizes_margin(5, 8);
  // fixed polyplets (king-connected animals)
  std::vector<long long> known{0, 1, 4, 20, 110, 638, 3832, 23592, 147941};
  for (int k = 1; k <= 8; ++k) CHECK(r.count_by_size[k] == known[k]);
  for (int k = 1; k <= 4; ++k) CHECK(r.max_closure_by_size[k] <= 4);
  CHECK(r.margin_components >= 0.0);
  CHECK(r.margin_large >= 0.0);
  CHECK(r.eta_sup > 0.0);
  CHECK(r.eta_sup == Approx(0.25));
}

TEST_CASE("regulator terms against the python oracle") {
  const int L = 2, n = 8;
  const long R = n * L;
  Field phi(R, R);
  for (long x = 0; x < R; ++x)
    for (long y = 0; y < R; ++y)
      phi(x, y) = std::cos(2 * kPi * x / R) + 0.5 * std::sin(2 * kPi * 2 * y / R) + 0.25 * std::cos(2 * kPi * (x + y) / R);
  Polymer X = make_polymer(1, n, {{1, 1}});
  RegulatorTerms t = regulator_terms(phi, X, L);
  CHECK(t.bulk == Approx(0.9321070255996479).epsilon(1e-12));
  CHECK(t.boundary == Approx(1.8642140511992957).epsilon(1e-12));
  CHECK(t.W2 == Approx(1.7524830041589483).epsilon(1e-12));
  CHECK(t.w2 == Approx(1.7524830041589483).epsilon(1e-12));
  RegulatorTerms p = regulator_terms_patch(phi.block(0, 0, 16, 16), 0, 0, X, L);
  CHECK(p.W2 == Approx(t.W2).epsilon(1e-14));
}

TEST_CASE("regulator G properties") {
  const int L = 2, n = 8;
  RegulatorParams p = RegulatorParams::make(0.05, 1, L);
  Polymer X = make_polymer(1, n, {{1, 1}}), Y = make_polymer(1, n, {{5, 5}}), XY = make_polymer(1, n, {{1, 1}, {5, 5}});
  CHECK(regulator_G(Field::Constant(16, 16, 3.7), X, L, p) == 1.0);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Field phi = random_smooth_field(16, 16.0, seed);
    CHECK(regulator_log_G(phi, XY, L, p) == Approx(regulator_log_G(phi, X, L, p) + regulator_log_G(phi, Y, L, p)).epsilon(1e-12));
    CHECK(p.c_w * p.kappa_L * w_j_squared(phi, X, L) <= regulator_log_G(phi, X, L, p));
  }
}

TEST_CASE("lattice inequality sides") {
  Field u = Field::Constant(10, 10, 2.0);
  for (int k = 1; k <= 4; ++k) {
    Sides s = trace_sides(u, k);
    CHECK(s.lhs <= s.rhs + 1e-12);
  }
  Sides q = quad_exp_sides(0.25 * Eigen::MatrixXd::Identity(1, 1));
  CHECK(q.lhs == Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-14));
  CHECK(q.rhs == Approx(std::exp(0.25)).epsilon(1e-14));
  Sides q4 = quad_exp_sides(0.25 * Eigen::MatrixXd::Identity(4, 4));
  CHECK(q4.lhs == Approx(16.0 / 9.0).epsilon(1e-14));
  CHECK_THROWS_AS(quad_exp_sides(0.6 * Eigen::MatrixXd::Identity(2, 2)), Error);
  InequalityFuzz f = fuzz_inequalities({8, 16, 32}, 100, 100, 7);
  CHECK(f.trace_ok);
  CHECK(f.sobolev_ok);
  CHECK(f.quad_exp_ok);
  CHECK(f.sobolev_C > 0.0);
}
