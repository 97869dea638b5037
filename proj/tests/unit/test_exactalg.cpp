#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cascadeho/errors.hpp"
#include "cascadeho/exactalg.hpp"
#include "oracles.hpp"

using namespace cascadeho;

namespace {

ChainComplex cellular_rp2() {
  // One cell in each dimension, d2 = 2, d1 = 0.
  ChainComplex c;
  for (long g = 0; g <= 2; ++g) c.generators.push_back({"e" + std::to_string(g), g, "", Rat(g + 1), ""});
  c.differential = IntMatrix(3, 3);
  c.differential.set(1, 2, 2);
  return c;
}

} // namespace

TEST_CASE("rationals print reduced and parse strictly") {
  Rat r(6, 4); // stored as given until canonicalized
  CHECK(r != Rat(3, 2));
  r.canonicalize();
  CHECK(to_string(r) == "3/2");
  CHECK(parse_rational("-7/21") == Rat(-1, 3));
  CHECK(parse_rational("5") == Rat(5));
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
}

TEST_CASE("sparse matrix arithmetic") {
  auto a = IntMatrix::from_dense({{1, 2}, {0, -1}});
  auto b = IntMatrix::from_dense({{3, 0}, {1, 1}});
  CHECK((a * b) == IntMatrix::from_dense({{5, 2}, {-1, -1}}));
  CHECK((a - a).is_zero());
  CHECK(a.transpose().get(1, 0) == 2);
  a.set(0, 1, 0);
  CHECK(a.entries().size() == 2);
  CHECK(determinant(IntMatrix::from_dense({{2, 1}, {7, 4}})) == 1);
  CHECK(rank_over_q(IntMatrix::from_dense({{1, 2}, {2, 4}})) == 1);
}

TEST_CASE("smith form of a hand example") {
  auto m = IntMatrix::from_dense({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}});
  auto f = smith_normal_form(m);
  CHECK((f.u * m * f.v) == f.s);
  CHECK(invariant_factors(m) == std::vector<Int>{2, 6, 12});
}

TEST_CASE("smith form agrees with determinantal divisors") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> dim(1, 5);
  for (int trial = 0; trial < 120; ++trial) {
    auto dense = oracle::random_dense(rng, dim(rng), dim(rng), 4);
    auto m = IntMatrix::from_dense(dense);
    auto f = smith_normal_form(m);
    REQUIRE((f.u * m * f.v) == f.s);
    CHECK(abs(determinant(f.u)) == 1);
    CHECK(abs(determinant(f.v)) == 1);
    CHECK(invariant_factors(m) == oracle::invariant_factors_by_minors(dense));
    CHECK(rank_over_q(m) == oracle::rank_by_elimination(dense));
  }
}

TEST_CASE("grading modes") {
  CHECK(GradingMode::modular(4).normalize(-1) == 3);
  CHECK(GradingMode::parity().normalize(5) == 1);
  CHECK(GradingMode::integer().normalize(-5) == -5);
}

TEST_CASE("homology of the real projective plane") {
  auto c = cellular_rp2();
  auto h = homology(c);
  CHECK(h.at("", 0).describe() == "Z");
  CHECK(h.at("", 1).describe() == "Z/2");
  CHECK(h.at("", 2).is_zero());
  auto q = rational_homology(c);
  auto expect = oracle::betti_by_elimination(c);
  for (const auto& [k, v] : expect) CHECK(q[k] == v);
}

TEST_CASE("square check names a witness") {
  ChainComplex c;
  for (long g = 0; g < 3; ++g) c.generators.push_back({"g" + std::to_string(g), g, "", Rat(g + 1), ""});
  c.differential = IntMatrix(3, 3);
  c.differential.set(1, 2, 1);
  c.differential.set(0, 1, 1);
  auto s = verify_square_zero(c);
  CHECK_FALSE(s.ok);
  REQUIRE(s.witness);
  CHECK(s.witness->first == "g2");
  CHECK(s.witness->second == "g0");
  CHECK_THROWS_AS(homology(c), SquareNonzero);
}

TEST_CASE("group descriptions") {
  HomologyGroup g{2, {2, 2, 6}, true};
  CHECK(g.describe() == "Z^2 + (Z/2)^2 + Z/6");
  CHECK(HomologyGroup{}.describe() == "0");
}
