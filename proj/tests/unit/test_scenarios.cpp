#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cascadeho/errors.hpp"
#include "cascadeho/scenarios.hpp"

#include <set>

using namespace cascadeho;

TEST_CASE("fixture registry") {
  auto names = fixture_names();
  CHECK(names.size() == 15);
  CHECK(std::set<std::string>(names.begin(), names.end()).size() == names.size());
  for (const auto& n : names) {
    auto f = fixture(n);
    CHECK(f.name == n);
    CHECK(rejection(f) == std::nullopt);
  }
  CHECK_THROWS_AS(fixture("no-such-thing"), UnknownFixture);
}

TEST_CASE("every mutation is refused with the code it was built for") {
  std::set<int> kinds_seen;
  for (const auto& n : fixture_names())
    for (const auto& m : mutations(n)) {
      CAPTURE(n);
      CAPTURE(mutation_name(m.kind));
      auto why = rejection(m.corrupted);
      REQUIRE(why);
      CHECK(*why == m.expected);
      kinds_seen.insert(static_cast<int>(m.kind));
    }
  CHECK(kinds_seen.size() == static_cast<std::size_t>(mutation_kind_count));
}

TEST_CASE("mutations leave the stored fixture untouched") {
  for (const auto& n : fixture_names()) {
    (void)mutations(n);
    CHECK(rejection(fixture(n)) == std::nullopt);
  }
}

TEST_CASE("scenario parameters are checked") {
  CHECK_THROWS_AS(period_doubling(PDSide::Plus, 4), InvalidScenario);
  CHECK_NOTHROW(period_doubling(PDSide::Plus, 4, true));
  CHECK_THROWS_AS(prequantization(1, 0, 2), InvalidScenario);
}
