#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cascadeho/errors.hpp"
#include "cascadeho/mbs.hpp"
#include "cascadeho/scenarios.hpp"
#include "oracles.hpp"

using namespace cascadeho;

namespace {

Rat q(long n, long d) {
  Rat r(n, d);
  r.canonicalize();
  return r;
}

PLMap line(Rat a, Rat b) { return PLMap{{{0, a}, {1, b}}}; }

Orbit orbit(std::string id, int parity, Rat action, long d = 1, bool good = true) {
  Orbit o;
  o.id = std::move(id);
  o.parity = parity;
  o.action = action;
  o.d = d;
  o.good = good;
  o.homotopy_class = "A";
  return o;
}

std::vector<MorseBottSystem> mbs_fixtures() {
  std::vector<MorseBottSystem> out;
  for (const auto& n : fixture_names()) {
    auto f = fixture(n);
    if (f.mbs) out.push_back(*f.mbs);
    if (f.morphism) {
      out.push_back(f.morphism->source);
      out.push_back(f.morphism->target);
    }
  }
  return out;
}

} // namespace

TEST_CASE("frac and PL evaluation") {
  CHECK(frac(q(-1, 4)) == q(3, 4));
  CHECK(frac(Rat(2)) == 0);
  PLMap m{{{0, 0}, {q(1, 2), q(1, 2)}, {1, 0}}};
  CHECK(m.eval(q(1, 4)) == q(1, 4));
  CHECK(m.eval(q(3, 4)) == q(1, 4));
  CHECK(m.winding() == 0);
  CHECK(line(q(1, 10), q(21, 10)).winding() == 2);
}

TEST_CASE("crossings of a degree-two lift") {
  auto xs = crossings(line(0, 2), ComponentKind::Circle, q(1, 3));
  REQUIRE(xs.size() == 2);
  CHECK(xs[0].t == q(1, 6));
  CHECK(xs[1].t == q(2, 3));
  CHECK(xs[0].dir == 1);
  CHECK_THROWS_AS(crossings(line(0, 2), ComponentKind::Circle, 0), NonRegularValue);
  CHECK_THROWS_AS(crossings(line(q(1, 5), q(1, 5)), ComponentKind::Interval, q(1, 5)), NonRegularValue);
}

TEST_CASE("a rigid point between orbits of different parity is a parity violation") {
  MorseBottSystem s;
  s.mode = GradingMode::parity();
  s.orbits["a"] = orbit("a", 0, 2);
  s.orbits["b"] = orbit("b", 1, 1);
  s.basepoints = {{"a", q(1, 2)}, {"b", q(1, 2)}};
  s.m0[{"a", "b"}] = {SignedPoint{q(1, 10), q(3, 10), 1}};
  CHECK(validate_system(s).has("grading.mismatch"));
  s.orbits["b"].parity = 0;
  CHECK(validate_system(s).ok());
}

TEST_CASE("a circle winding once over a bad orbit is not orientable") {
  MorseBottSystem s;
  s.mode = GradingMode::parity();
  s.orbits["h"] = orbit("h", 1, 2, 2, false);
  s.orbits["b"] = orbit("b", 0, 1);
  s.basepoints = {{"h", q(1, 2)}, {"b", q(1, 2)}};
  PLComponent c;
  c.e_plus = line(q(1, 10), q(11, 10));
  c.e_minus = line(q(3, 10), q(3, 10));
  s.m1[{"h", "b"}] = {c};
  auto r = validate_system(s);
  CHECK(r.has("orientability.circle"));
  s.m1[{"h", "b"}][0].e_plus = line(q(1, 10), q(21, 10));
  CHECK_FALSE(validate_system(s).has("orientability.circle"));
}

TEST_CASE("every stored system validates") {
  for (const auto& s : mbs_fixtures()) {
    auto r = validate_system(s);
    CHECK(r.ok());
  }
}

TEST_CASE("random basepoints stay generic and valid") {
  for (const auto& s : mbs_fixtures())
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      auto t = with_random_basepoints(s, seed);
      for (const auto& [id, p] : t.basepoints) CHECK(basepoint_generic(t, id, p));
      CHECK(validate_system(t).ok());
    }
}

TEST_CASE("signed preimages match dense sampling at the basepoints") {
  for (const auto& s : mbs_fixtures())
    for (const auto& [pair, comps] : s.m1) {
      Frame f = frame_for(s, pair);
      for (const auto& c : comps)
        for (Side side : {Side::Plus, Side::Minus}) {
          CirclePoint p = s.basepoint(side == Side::Plus ? pair.first : pair.second);
          auto got = signed_preimages(c, side, p, f);
          auto want = oracle::dense_preimages(c, side == Side::Plus, p, f);
          REQUIRE(got.size() == want.size());
          for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].t >= want[i].lo);
            CHECK(got[i].t <= want[i].hi);
            CHECK(got[i].sign == want[i].sign);
          }
        }
    }
}

TEST_CASE("shifting a basepoint onto an evaluation value breaks genericity") {
  auto s = *fixture("one-interval").mbs;
  s.basepoints["c"] = q(3, 10); // the m0 point's e_minus
  CHECK(validate_system(s).has("genericity.basepoint"));
}
