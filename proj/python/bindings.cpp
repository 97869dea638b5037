// Thin JSON-in, JSON-out bindings; the Python package decodes the reports.

#include "cascadeho/autonomous.hpp"
#include "cascadeho/cascade.hpp"
#include "cascadeho/errors.hpp"
#include "cascadeho/io.hpp"
#include "cascadeho/morphism.hpp"
#include "cascadeho/scenarios.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace cascadeho;
using io::json;

namespace {

io::Document parse(const std::string& text) { return io::parse_document(text); }

const AutonomousData& autonomous_of(const io::Document& d) {
  if (d.kind != FixtureKind::Autonomous) throw SchemaError("expected an autonomous document");
  return *d.autonomous;
}

ValidationReport validation_of(const io::Document& d) {
  switch (d.kind) {
  case FixtureKind::Mbs: return validate_system(*d.mbs);
  case FixtureKind::Autonomous: return validate_autonomous(*d.autonomous);
  case FixtureKind::Morphism: return validate_morphism(*d.morphism);
  }
  return {};
}

json report(const std::string& command, const io::Document& d) {
  json r = {{"command", command}, {"kind", kind_name(d.kind)}};
  auto v = validation_of(d);
  r["status"] = v.ok() ? "ok" : "invalid";
  r["violations"] = io::violations_json(v);
  return r;
}

std::string document(FixtureKind kind, AutonomousData a) {
  io::Document d;
  d.kind = kind;
  d.autonomous = std::move(a);
  return io::dump_document(d);
}

std::string validate(const std::string& text) { return report("validate", parse(text)).dump(); }

std::string nch(const std::string& text, std::optional<std::string> action_bound) {
  auto d = parse(text);
  json r = report("nch", d);
  if (r["status"] != "ok") return r.dump();
  std::optional<Rat> bound;
  if (action_bound) bound = parse_rational(*action_bound);
  HomologyResult h = d.kind == FixtureKind::Mbs ? nch_homology(*d.mbs, bound)
                                                : homology(block_differential(restrict_autonomous(
                                                      autonomous_of(d), bound, std::nullopt)));
  r["homology"] = io::homology_json(h);
  return r.dump();
}

std::string chs1(const std::string& text, long umax) {
  auto d = parse(text);
  json r = report("chs1", d);
  if (r["status"] != "ok") return r.dump();
  auto eq = equivariant_homology(autonomous_of(d), umax);
  r["truncation"] = umax;
  r["homology"] = io::homology_json(eq.homology);
  r["truncation_consistent"] = eq.truncation_consistent;
  r["truncation_witness"] = eq.truncation_witness;
  return r.dump();
}

std::string egh(const std::string& text) {
  auto d = parse(text);
  json r = report("egh", d);
  if (r["status"] == "ok") r["ranks"] = io::ranks_json(egh_homology(autonomous_of(d)));
  return r.dump();
}

std::string compare(const std::string& text, long umax, std::optional<std::string> reference) {
  auto d = parse(text);
  json r = report("compare", d);
  if (r["status"] != "ok") return r.dump();
  std::optional<io::Document> ref;
  if (reference) ref = parse(*reference);
  auto checks = compare_egh(autonomous_of(d), umax, ref ? &autonomous_of(*ref) : nullptr);
  r["status"] = checks.ok() ? "ok" : "mismatch";
  r["truncation"] = umax;
  r["checks"] = io::checks_json(checks);
  return r.dump();
}

std::string morphism(const std::string& text) {
  auto d = parse(text);
  if (d.kind != FixtureKind::Morphism) throw SchemaError("expected a morphism document");
  json r = report("morphism", d);
  if (r["status"] != "ok") return r.dump();
  std::vector<std::string> rows, cols;
  for (const auto& g : ncc_generators(d.morphism->target)) rows.push_back(g.id());
  for (const auto& g : ncc_generators(d.morphism->source)) cols.push_back(g.id());
  auto phi = induced_chain_map(*d.morphism);
  r["matrix"] = io::matrix_json(phi, rows, cols);
  r["identity"] = rows == cols && phi == IntMatrix::identity(rows.size());
  return r.dump();
}

} // namespace

PYBIND11_MODULE(_cascadeho, m) {
  m.doc() = "Exact contact-homology engine (JSON interface)";

  py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);
  py::register_exception<SquareNonzero>(m, "SquareNonzero");
  py::register_exception<ChainMapFailure>(m, "ChainMapFailure");
  py::register_exception<InvalidScenario>(m, "InvalidScenario", PyExc_ValueError);
  py::register_exception<UnknownFixture>(m, "UnknownFixture", PyExc_KeyError);
  py::register_exception<Unsupported>(m, "Unsupported", PyExc_NotImplementedError);

  m.def("fixture_names", &fixture_names);
  m.def("fixture", [](const std::string& name) { return io::dump_document(fixture(name)); }, py::arg("name"));
  m.def(
      "prequantization",
      [](long g, long e, long d, int sign) { return document(FixtureKind::Autonomous, prequantization(g, e, d, sign)); },
      py::arg("g"), py::arg("e"), py::arg("d"), py::arg("sign") = 1);
  m.def(
      "period_doubling",
      [](const std::string& side, long c, bool allow_even) {
        if (side != "minus" && side != "plus") throw InvalidScenario("side must be 'minus' or 'plus'");
        return document(FixtureKind::Autonomous,
                        period_doubling(side == "minus" ? PDSide::Minus : PDSide::Plus, c, allow_even));
      },
      py::arg("side"), py::arg("c") = 1, py::arg("allow_even") = false);
  m.def("validate", &validate, py::arg("document"));
  m.def("nch", &nch, py::arg("document"), py::arg("action_bound") = std::nullopt);
  m.def("chs1", &chs1, py::arg("document"), py::arg("umax"));
  m.def("egh", &egh, py::arg("document"));
  m.def("compare", &compare, py::arg("document"), py::arg("umax"), py::arg("reference") = std::nullopt);
  m.def("morphism", &morphism, py::arg("document"));
}
