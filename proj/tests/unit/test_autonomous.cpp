#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cascadeho/autonomous.hpp"
#include "cascadeho/cascade.hpp"
#include "cascadeho/errors.hpp"
#include "cascadeho/scenarios.hpp"
#include "oracles.hpp"

using namespace cascadeho;

namespace {

std::string at(const HomologyResult& h, const std::string& cls, long g) { return h.at(cls, g).describe(); }

std::string cls(long d) { return std::to_string(d) + "Γ"; }

} // namespace

TEST_CASE("prequantization data validates across parameters") {
  for (long g = 1; g <= 3; ++g)
    for (long e = 1; e <= 3; ++e)
      for (long d = 1; d <= 4; ++d) {
        auto a = prequantization(g, e, d);
        CHECK(validate_autonomous(a).ok());
        CHECK(autonomous_identities(a).ok());
      }
  CHECK_THROWS_AS(prequantization(-1, 1, 1), InvalidScenario);
  CHECK_THROWS_AS(prequantization(1, 1, 0), InvalidScenario);
}

TEST_CASE("prequantization nonequivariant homology") {
  auto h = homology(block_differential(prequantization(1, 1, 2)));
  CHECK(at(h, cls(2), 2) == "Z");
  CHECK(at(h, cls(2), 1) == "Z^2");
  CHECK(at(h, cls(2), 0) == "Z^2 + Z/2");
  CHECK(at(h, cls(2), -1) == "Z");
  auto k = homology(block_differential(prequantization(2, 1, 3)));
  CHECK(at(k, cls(3), 2) == "Z");
  CHECK(at(k, cls(3), 1) == "Z^4");
  CHECK(at(k, cls(3), 0) == "Z^4 + Z/3");
  CHECK(at(k, cls(3), -1) == "Z");
}

TEST_CASE("the sign of the doubly constrained coefficient does not matter") {
  for (long d = 1; d <= 3; ++d) {
    auto plus = homology(block_differential(prequantization(1, 2, d, 1)));
    auto minus = homology(block_differential(prequantization(1, 2, d, -1)));
    CHECK(plus.same_groups(minus));
    auto ep = equivariant_homology(prequantization(1, 2, d, 1), 3).homology;
    auto em = equivariant_homology(prequantization(1, 2, d, -1), 3).homology;
    CHECK(ep.same_groups(em));
  }
}

TEST_CASE("equivariant homology of a prequantization bundle") {
  auto r = equivariant_homology(prequantization(1, 1, 2), 3);
  CHECK(r.truncation_consistent);
  REQUIRE(r.homology.stable_range);
  CHECK(*r.homology.stable_range == 4);
  CHECK(at(r.homology, cls(2), -1) == "Z");
  CHECK(at(r.homology, cls(2), 0) == "Z^2 + Z/2");
  CHECK(at(r.homology, cls(2), 1) == "Z + (Z/2)^2");
  CHECK(at(r.homology, cls(2), 2) == "(Z/2)^2");
  CHECK(at(r.homology, cls(2), 3) == "(Z/2)^2");
  CHECK_FALSE(r.homology.at(cls(2), 5).stable);
}

TEST_CASE("cylindrical ranks of prequantization bundles") {
  for (long g = 1; g <= 2; ++g)
    for (long d = 1; d <= 3; ++d) {
      auto ranks = egh_homology(prequantization(g, 1, d));
      CHECK(ranks[{cls(d), -1}] == 1);
      CHECK(ranks[{cls(d), 0}] == static_cast<std::size_t>(2 * g));
      CHECK(ranks[{cls(d), 1}] == 1);
    }
}

TEST_CASE("period doubling with odd coefficients") {
  for (long c : {-5, -3, -1, 1, 3, 5}) {
    auto h = homology(block_differential(period_doubling(PDSide::Plus, c)));
    CHECK(at(h, cls(2), 1) == "Z");
    CHECK(at(h, cls(2), 2) == "Z");
    long nonzero = 0;
    for (const auto& [k, g] : h.groups) nonzero += !g.is_zero();
    CHECK(nonzero == 2);
  }
  CHECK_THROWS_AS(period_doubling(PDSide::Plus, 2), InvalidScenario);
}

TEST_CASE("an even coefficient changes the nonequivariant answer only") {
  auto even = period_doubling(PDSide::Plus, 2, true);
  auto h = homology(block_differential(even));
  CHECK(at(h, cls(2), 2) == "Z + Z/2");
  auto minus = period_doubling(PDSide::Minus);
  auto e = equivariant_homology(even, 5).homology;
  auto m = equivariant_homology(minus, 5).homology;
  for (long g = 1; g <= 8; ++g) CHECK(e.at(cls(2), g).same_group(m.at(cls(2), g)));
  auto checks = compare_egh(even, 5, &minus);
  bool nch_flagged = false;
  for (const auto& c : checks.checks)
    if (c.name == "reference.nch") nch_flagged = c.status == CheckResult::Status::Fail;
  CHECK(nch_flagged);
}

TEST_CASE("nonperfect Morse data") {
  auto a = *fixture("nonperfect-morse").autonomous;
  auto h = homology(block_differential(a));
  CHECK(at(h, "A", -1) == "Z");
  CHECK(at(h, "A", 0) == "Z/6");
  CHECK(h.at("A", 1).is_zero());
  CHECK(at(h, "A", 2) == "Z");
}

TEST_CASE("realized systems reproduce the block complex") {
  for (const auto& n : fixture_names()) {
    auto f = fixture(n);
    if (!f.autonomous) continue;
    if (n == "bad-pair") {
      CHECK_THROWS_AS(realize_as_system(*f.autonomous), Unsupported);
      continue;
    }
    auto s = realize_as_system(*f.autonomous);
    CHECK(validate_system(s).ok());
    auto c = build_ncc(s);
    auto b = block_differential(*f.autonomous);
    REQUIRE(c.size() == b.size());
    for (std::size_t i = 0; i < c.size(); ++i) CHECK(c.generators[i].id == b.generators[i].id);
    CHECK(c.differential == b.differential);
  }
}

TEST_CASE("stable range") {
  CHECK(stable_range(prequantization(1, 1, 2), 3) == 4);
  CHECK(stable_range(period_doubling(PDSide::Minus), 5) == 8);
}

TEST_CASE("autonomous validation codes") {
  auto a = prequantization(1, 1, 2);
  a.mj1[{"p", "r"}] = {CylinderRecord{1, 1}};
  CHECK(validate_autonomous(a).has("grading.mismatch"));
  auto b = prequantization(1, 1, 2);
  b.extra[{"check(p)", "check(r)"}] = 1;
  CHECK(validate_autonomous(b).has("extra.slot"));
  auto c = *fixture("nonperfect-morse").autonomous;
  c.mj1.begin()->second[0].du = 3;
  CHECK(validate_autonomous(c).has("record.du_divisibility"));
  auto d = *fixture("nonperfect-morse").autonomous;
  d.mj1.begin()->second[0].epsilon = 0;
  CHECK(validate_autonomous(d).has("record.epsilon"));
}

TEST_CASE("restriction to an action window") {
  auto a = prequantization(1, 1, 2);
  auto r = restrict_autonomous(a, Rat(3), std::nullopt);
  CHECK(r.orbits.count("p") == 0);
  CHECK(r.extra.empty());
  auto none = restrict_autonomous(a, std::nullopt, std::string("7Γ"));
  CHECK(none.orbits.empty());
}
