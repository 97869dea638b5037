#include "cascadeho/io.hpp"

#include "cascadeho/errors.hpp"

#include <fstream>
#include <iostream>
#include <iterator>
#include <set>
#include <sstream>

namespace cascadeho::io {

namespace {

// ------------------------------------------------------------------ writing

json rat(const Rat& r) { return to_string(r); }

json integer(const Int& v) {
  if (v.fits_slong_p()) return v.get_si();
  return v.get_str();
}

json mode_json(const GradingMode& m) {
  switch (m.kind) {
  case GradingMode::Kind::Integer: return {{"kind", "integer"}};
  case GradingMode::Kind::Modular: return {{"kind", "modular"}, {"modulus", m.modulus}};
  case GradingMode::Kind::Parity: return {{"kind", "parity"}};
  }
  return {};
}

json orbits_json(const std::map<std::string, Orbit>& orbits) {
  json out = json::object();
  for (const auto& [id, o] : orbits) {
    json j = {{"d", o.d}, {"parity", o.parity}, {"good", o.good}, {"action", rat(o.action)},
              {"class", o.homotopy_class}};
    if (o.grading) j["grading"] = *o.grading;
    out[id] = j;
  }
  return out;
}

json points_json(const std::map<OrbitPair, std::vector<SignedPoint>>& m) {
  json out = json::array();
  for (const auto& [pair, pts] : m) {
    json list = json::array();
    for (const auto& p : pts) list.push_back({{"e_plus", rat(p.e_plus)}, {"e_minus", rat(p.e_minus)}, {"sign", p.sign}});
    out.push_back({{"plus", pair.first}, {"minus", pair.second}, {"points", list}});
  }
  return out;
}

json plmap_json(const PLMap& m) {
  json out = json::array();
  for (const auto& b : m.points) out.push_back(json::array({rat(b.t), rat(b.value)}));
  return out;
}

json piece_json(const PieceRef& p) {
  json j = {{"family", family_name(p.family)}, {"index", p.index}};
  if (p.t) j["t"] = rat(*p.t);
  return j;
}

json label_json(const BoundaryLabel& l) {
  return {{"via", l.via}, {"upper", piece_json(l.upper)}, {"lower", piece_json(l.lower)}};
}

json components_json(const std::map<OrbitPair, std::vector<PLComponent>>& m) {
  json out = json::array();
  for (const auto& [pair, comps] : m) {
    json list = json::array();
    for (const auto& c : comps) {
      json j = {{"kind", c.kind == ComponentKind::Circle ? "circle" : "interval"},
                {"e_plus", plmap_json(c.e_plus)},
                {"e_minus", plmap_json(c.e_minus)},
                {"sign_start", c.sign_start}};
      if (c.start_label) j["start_label"] = label_json(*c.start_label);
      if (c.end_label) j["end_label"] = label_json(*c.end_label);
      list.push_back(j);
    }
    out.push_back({{"plus", pair.first}, {"minus", pair.second}, {"components", list}});
  }
  return out;
}

json counts_json(const std::map<OrbitPair, Int>& m) {
  json out = json::array();
  for (const auto& [pair, n] : m) out.push_back({{"plus", pair.first}, {"minus", pair.second}, {"count", integer(n)}});
  return out;
}

// ------------------------------------------------------------------ reading

// Walks a JSON value with a path for error messages; every key must be consumed.
class Reader {
public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {}

  [[noreturn]] void fail(const std::string& why) const { throw SchemaError(path_ + ": " + why); }

  const json& value() const { return j_; }
  const std::string& path() const { return path_; }

  void expect_object(std::initializer_list<const char*> required, std::initializer_list<const char*> optional = {}) const {
    if (!j_.is_object()) fail("expected an object");
    std::set<std::string> allowed;
    for (const char* k : required) {
      allowed.insert(k);
      if (!j_.contains(k)) fail(std::string("missing key '") + k + "'");
    }
    for (const char* k : optional) allowed.insert(k);
    for (const auto& [k, v] : j_.items())
      if (!allowed.count(k)) fail("unknown key '" + k + "'");
  }

  Reader at(const std::string& key) const { return Reader(j_.at(key), path_ + "." + key); }
  Reader at(std::size_t i) const { return Reader(j_.at(i), path_ + "[" + std::to_string(i) + "]"); }
  bool has(const std::string& key) const { return j_.contains(key); }

  std::vector<Reader> items() const {
    if (!j_.is_array()) fail("expected an array");
    std::vector<Reader> out;
    for (std::size_t i = 0; i < j_.size(); ++i) out.push_back(at(i));
    return out;
  }

  std::string str() const {
    if (!j_.is_string()) fail("expected a string");
    return j_.get<std::string>();
  }
  long integer_value() const {
    if (!j_.is_number_integer()) fail("expected an integer");
    return j_.get<long>();
  }
  bool boolean() const {
    if (!j_.is_boolean()) fail("expected a boolean");
    return j_.get<bool>();
  }
  Int big() const {
    if (j_.is_number_integer()) return Int(j_.get<long>());
    if (j_.is_string()) {
      std::string s = j_.get<std::string>();
      try {
        Rat r = parse_rational(s);
        if (r.get_den() == 1 && to_string(r) == s) return r.get_num();
      } catch (const std::invalid_argument&) {
      }
      fail("expected an integer, got '" + s + "'");
    }
    fail("expected an integer");
  }
  Rat rational() const {
    std::string s = str();
    Rat r;
    try {
      r = parse_rational(s);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
    if (to_string(r) != s) fail("rational '" + s + "' is not in lowest terms (expected '" + to_string(r) + "')");
    return r;
  }

private:
  const json& j_;
  std::string path_;
};

GradingMode read_mode(const Reader& r) {
  r.expect_object({"kind"}, {"modulus"});
  std::string k = r.at("kind").str();
  if (k == "integer") return GradingMode::integer();
  if (k == "parity") return GradingMode::parity();
  if (k == "modular") {
    if (!r.has("modulus")) r.fail("modular grading needs 'modulus'");
    return GradingMode::modular(r.at("modulus").integer_value());
  }
  r.at("kind").fail("unknown grading kind '" + k + "'");
}

std::map<std::string, Orbit> read_orbits(const Reader& r) {
  if (!r.value().is_object()) r.fail("expected an object keyed by orbit id");
  std::map<std::string, Orbit> out;
  for (const auto& [id, v] : r.value().items()) {
    Reader o = r.at(id);
    o.expect_object({"d", "parity", "good", "action", "class"}, {"grading"});
    Orbit orb;
    orb.id = id;
    orb.d = o.at("d").integer_value();
    orb.parity = static_cast<int>(o.at("parity").integer_value());
    orb.good = o.at("good").boolean();
    orb.action = o.at("action").rational();
    orb.homotopy_class = o.at("class").str();
    if (o.has("grading")) orb.grading = o.at("grading").integer_value();
    out[id] = orb;
  }
  return out;
}

OrbitPair read_pair(const Reader& r) { return {r.at("plus").str(), r.at("minus").str()}; }

template <class V>
void insert_unique(std::map<OrbitPair, V>& m, const OrbitPair& p, V v, const Reader& r) {
  if (m.count(p)) r.fail("pair " + pair_name(p) + " listed twice");
  m[p] = std::move(v);
}

std::map<OrbitPair, std::vector<SignedPoint>> read_points(const Reader& r) {
  std::map<OrbitPair, std::vector<SignedPoint>> out;
  for (const auto& e : r.items()) {
    e.expect_object({"plus", "minus", "points"});
    std::vector<SignedPoint> pts;
    for (const auto& p : e.at("points").items()) {
      p.expect_object({"e_plus", "e_minus", "sign"});
      pts.push_back({p.at("e_plus").rational(), p.at("e_minus").rational(), static_cast<int>(p.at("sign").integer_value())});
    }
    insert_unique(out, read_pair(e), std::move(pts), e);
  }
  return out;
}

PLMap read_plmap(const Reader& r) {
  PLMap m;
  for (const auto& b : r.items()) {
    if (!b.value().is_array() || b.value().size() != 2) b.fail("breakpoint must be a [t, value] pair");
    m.points.push_back({b.at(std::size_t{0}).rational(), b.at(std::size_t{1}).rational()});
  }
  return m;
}

Family read_family(const Reader& r) {
  std::string s = r.str();
  for (Family f : {Family::M0, Family::M1, Family::Phi0, Family::Phi1})
    if (s == family_name(f)) return f;
  r.fail("unknown family '" + s + "'");
}

PieceRef read_piece(const Reader& r) {
  r.expect_object({"family", "index"}, {"t"});
  PieceRef p;
  p.family = read_family(r.at("family"));
  long idx = r.at("index").integer_value();
  if (idx < 0) r.at("index").fail("index must be nonnegative");
  p.index = static_cast<std::size_t>(idx);
  if (r.has("t")) p.t = r.at("t").rational();
  return p;
}

BoundaryLabel read_label(const Reader& r) {
  r.expect_object({"via", "upper", "lower"});
  return {r.at("via").str(), read_piece(r.at("upper")), read_piece(r.at("lower"))};
}

std::map<OrbitPair, std::vector<PLComponent>> read_components(const Reader& r) {
  std::map<OrbitPair, std::vector<PLComponent>> out;
  for (const auto& e : r.items()) {
    e.expect_object({"plus", "minus", "components"});
    std::vector<PLComponent> comps;
    for (const auto& c : e.at("components").items()) {
      c.expect_object({"kind", "e_plus", "e_minus", "sign_start"}, {"start_label", "end_label"});
      PLComponent p;
      std::string k = c.at("kind").str();
      if (k == "circle") p.kind = ComponentKind::Circle;
      else if (k == "interval") p.kind = ComponentKind::Interval;
      else c.at("kind").fail("kind must be 'circle' or 'interval'");
      p.e_plus = read_plmap(c.at("e_plus"));
      p.e_minus = read_plmap(c.at("e_minus"));
      p.sign_start = static_cast<int>(c.at("sign_start").integer_value());
      if (c.has("start_label")) p.start_label = read_label(c.at("start_label"));
      if (c.has("end_label")) p.end_label = read_label(c.at("end_label"));
      comps.push_back(std::move(p));
    }
    insert_unique(out, read_pair(e), std::move(comps), e);
  }
  return out;
}

std::map<OrbitPair, Int> read_counts(const Reader& r) {
  std::map<OrbitPair, Int> out;
  for (const auto& e : r.items()) {
    e.expect_object({"plus", "minus", "count"});
    insert_unique(out, read_pair(e), e.at("count").big(), e);
  }
  return out;
}

MorseBottSystem read_system(const Reader& r) {
  r.expect_object({"grading", "orbits", "basepoints", "m0", "m1", "m2cc"});
  MorseBottSystem s;
  s.mode = read_mode(r.at("grading"));
  s.orbits = read_orbits(r.at("orbits"));
  Reader bp = r.at("basepoints");
  if (!bp.value().is_object()) bp.fail("expected an object keyed by orbit id");
  for (const auto& [id, v] : bp.value().items()) s.basepoints[id] = bp.at(id).rational();
  s.m0 = read_points(r.at("m0"));
  s.m1 = read_components(r.at("m1"));
  s.m2cc = read_counts(r.at("m2cc"));
  return s;
}

AutonomousData read_autonomous(const Reader& r) {
  r.expect_object({"grading", "orbits", "mj1", "extra"});
  AutonomousData d;
  d.mode = read_mode(r.at("grading"));
  d.orbits = read_orbits(r.at("orbits"));
  for (const auto& e : r.at("mj1").items()) {
    e.expect_object({"plus", "minus", "records"});
    std::vector<CylinderRecord> recs;
    for (const auto& c : e.at("records").items()) {
      c.expect_object({"epsilon", "du"});
      recs.push_back({static_cast<int>(c.at("epsilon").integer_value()), c.at("du").integer_value()});
    }
    insert_unique(d.mj1, read_pair(e), std::move(recs), e);
  }
  for (const auto& e : r.at("extra").items()) {
    e.expect_object({"source", "target", "value"});
    GeneratorPair key{e.at("source").str(), e.at("target").str()};
    if (d.extra.count(key)) e.fail("entry " + key.first + " -> " + key.second + " listed twice");
    d.extra[key] = e.at("value").big();
  }
  return d;
}

MorphismData read_morphism(const Reader& r) {
  r.expect_object({"source", "target", "phi0", "phi1", "phi2cc", "action_nonincrease", "construction"});
  MorphismData m;
  m.source = read_system(r.at("source"));
  m.target = read_system(r.at("target"));
  m.phi0 = read_points(r.at("phi0"));
  m.phi1 = read_components(r.at("phi1"));
  m.phi2cc = read_counts(r.at("phi2cc"));
  for (const auto& e : r.at("action_nonincrease").items()) {
    e.expect_object({"plus", "minus", "value"});
    insert_unique(m.action_nonincrease, read_pair(e), e.at("value").boolean(), e);
  }
  m.construction = r.at("construction").str();
  return m;
}

} // namespace

json to_json(const MorseBottSystem& s) {
  json bp = json::object();
  for (const auto& [id, p] : s.basepoints) bp[id] = rat(p);
  return {{"grading", mode_json(s.mode)}, {"orbits", orbits_json(s.orbits)}, {"basepoints", bp},
          {"m0", points_json(s.m0)},      {"m1", components_json(s.m1)},      {"m2cc", counts_json(s.m2cc)}};
}

json to_json(const AutonomousData& d) {
  json mj1 = json::array();
  for (const auto& [pair, recs] : d.mj1) {
    json list = json::array();
    for (const auto& r : recs) list.push_back({{"epsilon", r.epsilon}, {"du", r.du}});
    mj1.push_back({{"plus", pair.first}, {"minus", pair.second}, {"records", list}});
  }
  json extra = json::array();
  for (const auto& [key, v] : d.extra) extra.push_back({{"source", key.first}, {"target", key.second}, {"value", integer(v)}});
  return {{"grading", mode_json(d.mode)}, {"orbits", orbits_json(d.orbits)}, {"mj1", mj1}, {"extra", extra}};
}

json to_json(const MorphismData& m) {
  json an = json::array();
  for (const auto& [pair, v] : m.action_nonincrease) an.push_back({{"plus", pair.first}, {"minus", pair.second}, {"value", v}});
  return {{"source", to_json(m.source)},   {"target", to_json(m.target)},     {"phi0", points_json(m.phi0)},
          {"phi1", components_json(m.phi1)}, {"phi2cc", counts_json(m.phi2cc)}, {"action_nonincrease", an},
          {"construction", m.construction}};
}

Document parse_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("not valid JSON: ") + e.what());
  }
  Reader r(j, "$");
  r.expect_object({"schema_version", "kind", "payload"});
  long v = r.at("schema_version").integer_value();
  if (v != schema_version) r.at("schema_version").fail("unsupported schema version " + std::to_string(v));
  std::string kind = r.at("kind").str();
  Document d;
  Reader p = r.at("payload");
  if (kind == "mbs") {
    d.kind = FixtureKind::Mbs;
    d.mbs = read_system(p);
  } else if (kind == "autonomous") {
    d.kind = FixtureKind::Autonomous;
    d.autonomous = read_autonomous(p);
  } else if (kind == "morphism") {
    d.kind = FixtureKind::Morphism;
    d.morphism = read_morphism(p);
  } else {
    r.at("kind").fail("kind must be 'mbs', 'autonomous' or 'morphism'");
  }
  return d;
}

std::string dump_document(const Document& doc) {
  json payload;
  switch (doc.kind) {
  case FixtureKind::Mbs: payload = to_json(*doc.mbs); break;
  case FixtureKind::Autonomous: payload = to_json(*doc.autonomous); break;
  case FixtureKind::Morphism: payload = to_json(*doc.morphism); break;
  }
  json j = {{"schema_version", schema_version}, {"kind", kind_name(doc.kind)}, {"payload", payload}};
  return j.dump(2) + "\n";
}

std::string read_text(const std::string& path) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write to '" + path + "' failed");
}

Document load_document(const std::string& path) { return parse_document(read_text(path)); }

// ------------------------------------------------------------------ reports

json homology_json(const HomologyResult& h) {
  json groups = json::array();
  for (const auto& [key, g] : h.groups) {
    json tors = json::array();
    for (const auto& t : g.torsion) tors.push_back(integer(t));
    groups.push_back({{"class", key.first},
                      {"grading", key.second},
                      {"label", h.mode.label(key.second)},
                      {"free_rank", g.free_rank},
                      {"torsion", tors},
                      {"stable", g.stable},
                      {"group", g.describe()}});
  }
  json out = {{"mode", mode_json(h.mode)}, {"groups", groups}};
  out["stable_range"] = h.stable_range ? json(*h.stable_range) : json(nullptr);
  return out;
}

json ranks_json(const std::map<HomologyKey, std::size_t>& ranks) {
  json out = json::array();
  for (const auto& [key, r] : ranks) out.push_back({{"class", key.first}, {"grading", key.second}, {"rank", r}});
  return out;
}

json checks_json(const CheckList& c) {
  json out = json::array();
  for (const auto& x : c.checks) out.push_back({{"name", x.name}, {"status", status_name(x.status)}, {"detail", x.detail}});
  return out;
}

json violations_json(const ValidationReport& r) {
  json out = json::array();
  for (const auto& v : r.violations) out.push_back({{"code", v.code}, {"location", v.location}, {"message", v.message}});
  return out;
}

json matrix_json(const IntMatrix& m, const std::vector<std::string>& rows, const std::vector<std::string>& cols) {
  json entries = json::array();
  for (const auto& [k, v] : m.entries())
    entries.push_back({{"row", rows.at(k.first)}, {"column", cols.at(k.second)}, {"value", integer(v)}});
  return {{"rows", rows}, {"columns", cols}, {"entries", entries}};
}

namespace {

std::string scalar(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_null()) return "none";
  return j.dump();
}

void render_homology(std::ostringstream& os, const json& h, const std::string& title) {
  os << title << " (stable range: " << scalar(h.at("stable_range")) << ")\n";
  for (const auto& g : h.at("groups")) {
    os << "  class " << scalar(g.at("class")) << "  degree " << scalar(g.at("label")) << ": "
       << scalar(g.at("group"));
    if (!g.at("stable").get<bool>()) os << "  [unstable]";
    os << "\n";
  }
}

} // namespace

std::string render_text(const json& report) {
  std::ostringstream os;
  os << "command: " << scalar(report.value("command", json("?")));
  if (report.contains("kind")) os << "  kind: " << scalar(report.at("kind"));
  os << "\n";
  if (report.contains("status")) os << "status: " << scalar(report.at("status")) << "\n";
  if (report.contains("error")) os << "error: " << scalar(report.at("error")) << "\n";
  if (report.contains("violations")) {
    os << "violations: " << report.at("violations").size() << "\n";
    for (const auto& v : report.at("violations"))
      os << "  " << scalar(v.at("code")) << "  " << scalar(v.at("location")) << "  " << scalar(v.at("message")) << "\n";
  }
  if (report.contains("truncation")) os << "truncation K: " << scalar(report.at("truncation")) << "\n";
  if (report.contains("homology")) render_homology(os, report.at("homology"), "homology");
  if (report.contains("truncation_consistent"))
    os << "truncation consistent: " << scalar(report.at("truncation_consistent"))
       << (report.value("truncation_witness", std::string()).empty()
               ? std::string()
               : "  (" + report.at("truncation_witness").get<std::string>() + ")")
       << "\n";
  if (report.contains("ranks")) {
    os << "rational ranks\n";
    for (const auto& r : report.at("ranks"))
      os << "  class " << scalar(r.at("class")) << "  degree " << scalar(r.at("grading")) << ": " << scalar(r.at("rank")) << "\n";
  }
  if (report.contains("checks")) {
    os << "checks\n";
    for (const auto& c : report.at("checks")) {
      os << "  " << scalar(c.at("status")) << "  " << scalar(c.at("name"));
      if (!c.at("detail").get<std::string>().empty()) os << "  " << scalar(c.at("detail"));
      os << "\n";
    }
  }
  if (report.contains("matrix")) {
    const auto& m = report.at("matrix");
    os << "matrix (" << m.at("rows").size() << " x " << m.at("columns").size() << ", nonzero entries)\n";
    for (const auto& e : m.at("entries"))
      os << "  " << scalar(e.at("column")) << " -> " << scalar(e.at("row")) << ": " << scalar(e.at("value")) << "\n";
  }
  if (report.contains("identity")) os << "identity: " << scalar(report.at("identity")) << "\n";
  if (report.contains("document")) os << "document: " << scalar(report.at("document")) << "\n";
  return os.str();
}

} // namespace cascadeho::io
