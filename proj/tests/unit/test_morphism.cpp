#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cascadeho/errors.hpp"
#include "cascadeho/morphism.hpp"
#include "cascadeho/scenarios.hpp"

using namespace cascadeho;

namespace {

std::vector<std::pair<std::string, MorseBottSystem>> systems() {
  std::vector<std::pair<std::string, MorseBottSystem>> out;
  for (const auto& n : fixture_names()) {
    auto f = fixture(n);
    if (f.mbs) out.emplace_back(n, *f.mbs);
  }
  return out;
}

} // namespace

TEST_CASE("the trivial cobordism induces the identity") {
  for (const auto& [name, s] : systems()) {
    CAPTURE(name);
    auto m = trivial_cobordism(s);
    CHECK(validate_morphism(m).ok());
    auto phi = induced_chain_map(m);
    CHECK(phi == IntMatrix::identity(ncc_generators(s).size()));
  }
}

TEST_CASE("a cobordism with one rigid point and one interval") {
  auto m = *fixture("phi-interval").morphism;
  CHECK(validate_morphism(m).ok());
  auto phi = induced_chain_map(m);
  auto src = ncc_generators(m.source), dst = ncc_generators(m.target);
  REQUIRE(phi.entries().size() == 1);
  auto [key, v] = *phi.entries().begin();
  CHECK(dst[key.first].id() == "check(c)");
  CHECK(src[key.second].id() == "hat(a)");
  CHECK(v == 1);
}

TEST_CASE("stacking with a trivial cobordism multiplies the matrices") {
  auto f = *fixture("phi-interval").morphism;
  auto before = trivial_cobordism(f.source);
  auto after = trivial_cobordism(f.target);
  auto g = f;
  g.source = before.target;
  auto left = compose(before, g);
  CHECK(induced_chain_map(left) == chain_map_matrix(g) * chain_map_matrix(before));
  // The cylinder over the target moves b's basepoint onto a breakpoint image of phi1.
  CHECK_THROWS_AS(compose(f, after), NonGenericConfiguration);
  auto ip = *fixture("interval-pair").mbs;
  auto t1 = trivial_cobordism(ip);
  auto t2 = trivial_cobordism(t1.target);
  auto stacked = compose(t1, t2);
  CHECK(validate_morphism(stacked).ok());
  CHECK(induced_chain_map(stacked) == chain_map_matrix(t2) * chain_map_matrix(t1));
}

TEST_CASE("composition refuses mismatched or unsupported pairs") {
  auto f = *fixture("phi-interval").morphism;
  CHECK_THROWS_AS(compose(f, f), std::invalid_argument);
  auto g = f;
  g.source = f.target;
  g.target = f.target;
  g.phi0.clear();
  g.phi1.clear();
  g.construction.clear();
  CHECK_THROWS_AS(compose(f, g), Unsupported);
}

TEST_CASE("dropping a broken pair breaks the chain map") {
  auto m = *fixture("one-interval").mbs;
  auto t = trivial_cobordism(m);
  t.phi1.begin()->second.pop_back();
  bool rejected = !validate_morphism(t).ok();
  if (!rejected) CHECK_THROWS_AS(induced_chain_map(t), ChainMapFailure);
  else CHECK(rejected);
}
