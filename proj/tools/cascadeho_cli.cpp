// cascadeho: command-line front end. Every command builds one JSON report;
// text output is rendered from that report so both formats carry the same numbers.

#include "cascadeho/autonomous.hpp"
#include "cascadeho/cascade.hpp"
#include "cascadeho/errors.hpp"
#include "cascadeho/io.hpp"
#include "cascadeho/morphism.hpp"
#include "cascadeho/scenarios.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>

using namespace cascadeho;
using io::json;

namespace {

enum Exit { Ok = 0, Invalid = 1, Inconsistent = 2, IoFailure = 3 };

struct Options {
  std::string format = "text";
  std::string file, reference, output = "-";
  std::vector<std::string> files;
  std::optional<std::string> action_bound, cls;
  std::optional<std::uint64_t> seed;
  long umax = 3;
  // scenario parameters
  std::string scenario_kind;
  long g = 1, e = 1, d = 1, c = 1;
  int sign = 1;
  std::string side = "minus", name, mutation;
  bool allow_even = false, realize = false;
};

void emit(const Options& o, const json& report) {
  if (o.format == "json") std::cout << report.dump(2) << "\n";
  else std::cout << io::render_text(report);
}

json base_report(const std::string& command, const io::Document* doc = nullptr) {
  json r = {{"command", command}};
  if (doc) r["kind"] = kind_name(doc->kind);
  return r;
}

[[noreturn]] void wrong_kind(const std::string& command, const io::Document& doc) {
  throw SchemaError(command + " does not accept " + std::string(kind_name(doc.kind)) + " documents");
}

ValidationReport validation_of(const io::Document& doc) {
  switch (doc.kind) {
  case FixtureKind::Mbs: return validate_system(*doc.mbs);
  case FixtureKind::Autonomous: return validate_autonomous(*doc.autonomous);
  case FixtureKind::Morphism: return validate_morphism(*doc.morphism);
  }
  return {};
}

// Emits the violation report and returns true when the document is invalid.
bool reject_invalid(const Options& o, const std::string& command, const io::Document& doc) {
  auto v = validation_of(doc);
  if (v.ok()) return false;
  json r = base_report(command, &doc);
  r["status"] = "invalid";
  r["violations"] = io::violations_json(v);
  emit(o, r);
  return true;
}

int cmd_validate(const Options& o) {
  io::Document doc = io::load_document(o.file);
  if (reject_invalid(o, "validate", doc)) return Invalid;
  switch (doc.kind) {
  case FixtureKind::Mbs: {
    auto sq = verify_square_zero(build_ncc(*doc.mbs));
    if (!sq.ok) throw SquareNonzero(sq.witness->first, sq.witness->second, to_string(sq.value));
    break;
  }
  case FixtureKind::Autonomous: (void)block_differential(*doc.autonomous); break;
  case FixtureKind::Morphism: (void)induced_chain_map(*doc.morphism); break;
  }
  json r = base_report("validate", &doc);
  r["status"] = "ok";
  r["violations"] = json::array();
  emit(o, r);
  return Ok;
}

int cmd_nch(const Options& o) {
  io::Document doc = io::load_document(o.file);
  if (doc.kind == FixtureKind::Morphism) wrong_kind("nch", doc);
  if (reject_invalid(o, "nch", doc)) return Invalid;
  std::optional<Rat> bound;
  if (o.action_bound) {
    try {
      bound = parse_rational(*o.action_bound);
    } catch (const std::invalid_argument& e) {
      throw SchemaError(std::string("--action-bound: ") + e.what());
    }
  }
  HomologyResult h;
  if (doc.kind == FixtureKind::Mbs) {
    MorseBottSystem sys = *doc.mbs;
    if (o.seed) sys = with_random_basepoints(sys, *o.seed);
    if (o.cls) sys = restrict_class(sys, *o.cls);
    h = nch_homology(sys, bound);
  } else {
    if (o.seed) throw SchemaError("--basepoints needs a Morse-Bott document; autonomous data has no basepoints");
    h = homology(block_differential(restrict_autonomous(*doc.autonomous, bound, o.cls)));
  }
  json r = base_report("nch", &doc);
  r["status"] = "ok";
  r["homology"] = io::homology_json(h);
  emit(o, r);
  return Ok;
}

const AutonomousData& autonomous_of(const std::string& command, const io::Document& doc) {
  if (doc.kind != FixtureKind::Autonomous) wrong_kind(command, doc);
  return *doc.autonomous;
}

int cmd_egh(const Options& o) {
  io::Document doc = io::load_document(o.file);
  const AutonomousData& data = autonomous_of("egh", doc);
  if (reject_invalid(o, "egh", doc)) return Invalid;
  json r = base_report("egh", &doc);
  r["status"] = "ok";
  r["ranks"] = io::ranks_json(egh_homology(data));
  emit(o, r);
  return Ok;
}

int cmd_chs1(const Options& o) {
  io::Document doc = io::load_document(o.file);
  const AutonomousData& data = autonomous_of("chs1", doc);
  if (reject_invalid(o, "chs1", doc)) return Invalid;
  auto eq = equivariant_homology(data, o.umax);
  json r = base_report("chs1", &doc);
  r["status"] = eq.truncation_consistent ? "ok" : "truncation-mismatch";
  r["truncation"] = o.umax;
  r["homology"] = io::homology_json(eq.homology);
  r["truncation_consistent"] = eq.truncation_consistent;
  r["truncation_witness"] = eq.truncation_witness;
  emit(o, r);
  return eq.truncation_consistent ? Ok : Inconsistent;
}

int cmd_compare(const Options& o) {
  io::Document doc = io::load_document(o.file);
  const AutonomousData& data = autonomous_of("compare", doc);
  if (reject_invalid(o, "compare", doc)) return Invalid;
  std::optional<io::Document> ref;
  if (!o.reference.empty()) {
    ref = io::load_document(o.reference);
    (void)autonomous_of("compare --reference", *ref);
    if (reject_invalid(o, "compare", *ref)) return Invalid;
  }
  CheckList checks = compare_egh(data, o.umax, ref ? &*ref->autonomous : nullptr);
  json r = base_report("compare", &doc);
  r["status"] = checks.ok() ? "ok" : "mismatch";
  r["truncation"] = o.umax;
  r["checks"] = io::checks_json(checks);
  r["ranks"] = io::ranks_json(egh_homology(data));
  r["homology"] = io::homology_json(equivariant_homology(data, o.umax).homology);
  emit(o, r);
  return checks.ok() ? Ok : Invalid;
}

int cmd_morphism(const Options& o) {
  if (o.files.size() != 1 && o.files.size() != 3)
    throw SchemaError("morphism takes <src> <dst> <phi>, or a single self-contained <phi>");
  io::Document doc = io::load_document(o.files.back());
  if (doc.kind != FixtureKind::Morphism) wrong_kind("morphism", doc);
  if (o.files.size() == 3) {
    io::Document src = io::load_document(o.files[0]), dst = io::load_document(o.files[1]);
    if (src.kind != FixtureKind::Mbs) wrong_kind("morphism <src>", src);
    if (dst.kind != FixtureKind::Mbs) wrong_kind("morphism <dst>", dst);
    doc.morphism->source = *src.mbs;
    doc.morphism->target = *dst.mbs;
  }
  if (reject_invalid(o, "morphism", doc)) return Invalid;
  const MorphismData& m = *doc.morphism;
  IntMatrix phi = induced_chain_map(m);
  std::vector<std::string> rows, cols;
  for (const auto& g : ncc_generators(m.target)) rows.push_back(g.id());
  for (const auto& g : ncc_generators(m.source)) cols.push_back(g.id());
  json r = base_report("morphism", &doc);
  r["status"] = "ok";
  r["matrix"] = io::matrix_json(phi, rows, cols);
  r["identity"] = rows == cols && phi == IntMatrix::identity(rows.size());
  emit(o, r);
  return Ok;
}

std::optional<MutationKind> parse_mutation(const std::string& s) {
  for (int k = 1; k <= mutation_kind_count; ++k) {
    auto mk = static_cast<MutationKind>(k);
    if (s == mutation_name(mk) || s == std::to_string(k)) return mk;
  }
  return std::nullopt;
}

int cmd_scenario(const Options& o) {
  io::Document doc;
  const std::string& k = o.scenario_kind;
  if (k == "list") {
    json r = base_report("scenario");
    json names = json::array();
    for (const auto& n : fixture_names()) names.push_back(n);
    r["fixtures"] = names;
    if (o.format == "json") std::cout << r.dump(2) << "\n";
    else
      for (const auto& n : fixture_names()) std::cout << n << "\n";
    return Ok;
  }
  if (k == "prequantization") {
    doc.kind = FixtureKind::Autonomous;
    doc.autonomous = prequantization(o.g, o.e, o.d, o.sign);
  } else if (k == "period-doubling") {
    if (o.side != "minus" && o.side != "plus") throw InvalidScenario("--side must be 'minus' or 'plus'");
    doc.kind = FixtureKind::Autonomous;
    doc.autonomous = period_doubling(o.side == "minus" ? PDSide::Minus : PDSide::Plus, o.c, o.allow_even);
  } else if (k == "fixture") {
    doc = fixture(o.name);
  } else if (k == "mutation") {
    auto mk = parse_mutation(o.mutation);
    if (!mk) throw InvalidScenario("unknown mutation kind '" + o.mutation + "'");
    bool found = false;
    for (auto& m : mutations(o.name))
      if (m.kind == *mk) {
        doc = m.corrupted;
        found = true;
      }
    if (!found) throw InvalidScenario("fixture '" + o.name + "' has nothing to corrupt for " + mutation_name(*mk));
  } else {
    throw InvalidScenario("unknown scenario kind '" + k + "'");
  }
  if (o.realize) {
    if (doc.kind != FixtureKind::Autonomous) throw InvalidScenario("--realize applies to autonomous scenarios");
    MorseBottSystem s = realize_as_system(*doc.autonomous);
    doc.kind = FixtureKind::Mbs;
    doc.mbs = s;
    doc.autonomous.reset();
  }
  io::write_text(o.output, io::dump_document(doc));
  if (o.output != "-") {
    json r = base_report("scenario", &doc);
    r["status"] = "ok";
    r["document"] = o.output;
    emit(o, r);
  }
  return Ok;
}

int cmd_report(const Options& o) {
  json r;
  try {
    r = json::parse(io::read_text(o.file));
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("report is not valid JSON: ") + e.what());
  }
  if (!r.is_object() || !r.contains("command")) throw SchemaError("not a cascadeho report");
  emit(o, r);
  return Ok;
}

int failure(const Options& o, int code, const std::string& kind, const std::string& what) {
  std::cerr << "cascadeho: " << what << "\n";
  json r = {{"command", "error"}, {"status", kind}, {"error", what}, {"exit_code", code}};
  if (o.format == "json") std::cout << r.dump(2) << "\n";
  return code;
}

} // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Exact contact-homology engine over Morse-Bott and autonomous data"};
  app.require_subcommand(1);
  app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"text", "json"}));
  std::function<int(const Options&)> action;

  auto file_arg = [&](CLI::App* sub) { sub->add_option("file", o.file, "Input document ('-' for stdin)")->required(); };

  auto* validate = app.add_subcommand("validate", "Validate a document");
  file_arg(validate);
  validate->callback([&] { action = cmd_validate; });

  auto* nch = app.add_subcommand("nch", "Nonequivariant homology");
  file_arg(nch);
  nch->add_option("--action-bound", o.action_bound, "Keep orbits with action below this rational");
  nch->add_option("--class", o.cls, "Restrict to one homotopy class");
  nch->add_option("--basepoints", o.seed, "Replace basepoints by seeded random generic ones");
  nch->callback([&] { action = cmd_nch; });

  auto* egh = app.add_subcommand("egh", "Cylindrical homology ranks over Q");
  file_arg(egh);
  egh->callback([&] { action = cmd_egh; });

  auto* chs1 = app.add_subcommand("chs1", "Equivariant homology, truncated at U^K");
  file_arg(chs1);
  chs1->add_option("--umax", o.umax, "Truncation K")->required()->check(CLI::NonNegativeNumber);
  chs1->callback([&] { action = cmd_chs1; });

  auto* compare = app.add_subcommand("compare", "Compare equivariant and cylindrical homology");
  file_arg(compare);
  compare->add_option("--umax", o.umax, "Truncation K")->required()->check(CLI::NonNegativeNumber);
  compare->add_option("--reference", o.reference, "Autonomous document to compare invariants against");
  compare->callback([&] { action = cmd_compare; });

  auto* morphism = app.add_subcommand("morphism", "Chain map induced by cobordism data");
  morphism->add_option("files", o.files, "<src> <dst> <phi>, or one self-contained <phi>")->required();
  morphism->callback([&] { action = cmd_morphism; });

  auto* scenario = app.add_subcommand("scenario", "Write a scenario, fixture or mutated fixture document");
  scenario->add_option("kind", o.scenario_kind, "prequantization | period-doubling | fixture | mutation | list")
      ->required();
  scenario->add_option("--g", o.g, "Genus");
  scenario->add_option("--e", o.e, "Euler number");
  scenario->add_option("--d", o.d, "Multiplicity");
  scenario->add_option("--sign", o.sign, "Sign of the prequantization coefficient")->check(CLI::IsMember({-1, 1}));
  scenario->add_option("--side", o.side, "minus | plus");
  scenario->add_option("--c", o.c, "Unknown coefficient after period doubling");
  scenario->add_flag("--allow-even", o.allow_even, "Accept even c (negative controls)");
  scenario->add_option("--name", o.name, "Fixture name");
  scenario->add_option("--mutation", o.mutation, "Mutation kind, by number or name");
  scenario->add_flag("--realize", o.realize, "Emit a Morse-Bott system realizing the autonomous data");
  scenario->add_option("-o,--output", o.output, "Output path ('-' for stdout)");
  scenario->callback([&] { action = cmd_scenario; });

  auto* report = app.add_subcommand("report", "Re-render a saved JSON report");
  file_arg(report);
  report->callback([&] { action = cmd_report; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return IoFailure;
  }

  try {
    return action(o);
  } catch (const SquareNonzero& e) {
    return failure(o, Inconsistent, "square-nonzero", e.what());
  } catch (const ChainMapFailure& e) {
    return failure(o, Inconsistent, "chain-map-failure", e.what());
  } catch (const NonGenericConfiguration& e) {
    return failure(o, Invalid, "non-generic", e.what());
  } catch (const NonRegularValue& e) {
    return failure(o, Invalid, "non-regular", e.what());
  } catch (const NonDistinct& e) {
    return failure(o, Invalid, "non-distinct", e.what());
  } catch (const InvalidComplex& e) {
    return failure(o, Invalid, "invalid-complex", e.what());
  } catch (const SchemaError& e) {
    return failure(o, IoFailure, "schema-error", e.what());
  } catch (const io::IoError& e) {
    return failure(o, IoFailure, "io-error", e.what());
  } catch (const UnknownFixture& e) {
    return failure(o, IoFailure, "unknown-fixture", e.what());
  } catch (const InvalidScenario& e) {
    return failure(o, IoFailure, "invalid-scenario", e.what());
  } catch (const Unsupported& e) {
    return failure(o, IoFailure, "unsupported", e.what());
  } catch (const std::exception& e) {
    return failure(o, IoFailure, "error", e.what());
  }
}
