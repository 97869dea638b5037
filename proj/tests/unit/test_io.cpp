#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cascadeho/cascade.hpp"
#include "cascadeho/errors.hpp"
#include "cascadeho/io.hpp"
#include "cascadeho/scenarios.hpp"

using namespace cascadeho;
using io::json;

namespace {

std::string doc_of(const std::string& name) {
  io::Document d = fixture(name);
  return io::dump_document(d);
}

json edit(const std::string& name) { return json::parse(doc_of(name)); }

void expect_schema_error(const json& j) { CHECK_THROWS_AS(io::parse_document(j.dump()), SchemaError); }

} // namespace

TEST_CASE("documents round-trip byte for byte") {
  for (const auto& n : fixture_names()) {
    CAPTURE(n);
    auto text = doc_of(n);
    auto again = io::dump_document(io::parse_document(text));
    CHECK(again == text);
    CHECK(text.back() == '\n');
  }
}

TEST_CASE("parsed systems compute the same homology") {
  for (const auto& n : {"one-interval", "interval-pair", "prequantization-mbs"}) {
    auto f = fixture(n);
    auto g = io::parse_document(doc_of(n));
    REQUIRE(g.mbs);
    CHECK(nch_homology(*g.mbs).same_groups(nch_homology(*f.mbs)));
  }
}

TEST_CASE("rationals must be reduced") {
  auto j = edit("one-interval");
  j["payload"]["basepoints"]["a"] = "2/4";
  expect_schema_error(j);
  j["payload"]["basepoints"]["a"] = 0.5;
  expect_schema_error(j);
}

TEST_CASE("unknown keys and versions are refused") {
  auto j = edit("one-interval");
  j["payload"]["colour"] = "red";
  expect_schema_error(j);
  auto k = edit("one-interval");
  k["schema_version"] = 2;
  expect_schema_error(k);
  auto l = edit("prequantization");
  l["kind"] = "mbs";
  expect_schema_error(l);
  CHECK_THROWS_AS(io::parse_document("{not json"), SchemaError);
}

TEST_CASE("a pair listed twice is refused") {
  auto j = edit("one-interval");
  auto& m0 = j["payload"]["m0"];
  REQUIRE(m0.is_array());
  REQUIRE(!m0.empty());
  m0.push_back(m0[0]);
  expect_schema_error(j);
}

TEST_CASE("large integers travel as strings") {
  auto a = prequantization(1, 1, 2);
  a.extra.begin()->second = Int("123456789012345678901234567890");
  io::Document d;
  d.kind = FixtureKind::Autonomous;
  d.autonomous = a;
  auto text = io::dump_document(d);
  CHECK(text.find("\"123456789012345678901234567890\"") != std::string::npos);
  auto back = io::parse_document(text);
  CHECK(back.autonomous->extra == a.extra);
}

TEST_CASE("text rendering carries the homology") {
  json report = {{"command", "nch"}, {"kind", "mbs"}, {"status", "ok"}};
  report["homology"] = io::homology_json(nch_homology(*fixture("interval-pair").mbs));
  auto text = io::render_text(report);
  CHECK(text.find("Z^2") != std::string::npos);
}
