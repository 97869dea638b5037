#include "cascadeho/scenarios.hpp"

#include "cascadeho/cascade.hpp"
#include "cascadeho/errors.hpp"

#include <functional>
#include <numeric>

namespace cascadeho {

namespace {

Orbit make_orbit(const std::string& id, long grading, const Rat& action, long d = 1, bool good = true,
                 const std::string& cls = "A") {
  Orbit o;
  o.id = id;
  o.d = d;
  o.grading = grading;
  o.parity = static_cast<int>(((grading % 2) + 2) % 2);
  o.good = good;
  o.action = action;
  o.homotopy_class = cls;
  return o;
}

void add(std::map<std::string, Orbit>& orbits, Orbit o) {
  std::string id = o.id;
  orbits[id] = std::move(o);
}

PLMap pl(std::initializer_list<std::pair<Rat, Rat>> pts) {
  PLMap m;
  for (const auto& [t, v] : pts) m.points.push_back({t, v});
  return m;
}

Rat q(long n, long d) {
  Rat r(n, d);
  r.canonicalize();
  return r;
}

} // namespace

AutonomousData prequantization(long g, long e, long d, int sign) {
  if (g < 1 || e < 1 || d < 1) throw InvalidScenario("prequantization needs g, e, d >= 1");
  if (sign != 1 && sign != -1) throw InvalidScenario("sign must be +1 or -1");
  AutonomousData data;
  const std::string cls = std::to_string(d) + "Γ";
  add(data.orbits, make_orbit("p", 1, 3, d, true, cls));
  for (long i = 1; i <= 2 * g; ++i) add(data.orbits, make_orbit("q" + std::to_string(i), 0, 2, d, true, cls));
  add(data.orbits, make_orbit("r", -1, 1, d, true, cls));
  data.extra[{"check(p)", "hat(r)"}] = Int(sign * d * e);
  return data;
}

AutonomousData period_doubling(PDSide side, long c, bool allow_even) {
  AutonomousData data;
  const std::string cls = "2Γ";
  if (side == PDSide::Minus) {
    add(data.orbits, make_orbit("E1", 1, 2, 2, true, cls));
    return data;
  }
  if (c % 2 == 0 && !allow_even) throw InvalidScenario("period doubling needs an odd coefficient c");
  add(data.orbits, make_orbit("H1", 2, 2, 2, false, cls));
  add(data.orbits, make_orbit("e2", 1, 1, 1, true, cls));
  data.extra[{"hat(H1)", "hat(e2)"}] = Int(c);
  return data;
}

const char* kind_name(FixtureKind k) {
  switch (k) {
  case FixtureKind::Mbs: return "mbs";
  case FixtureKind::Autonomous: return "autonomous";
  case FixtureKind::Morphism: return "morphism";
  }
  return "?";
}

namespace {

// Two good orbits a > b with a third orbit c between; the interval in m1(a,b)
// has both ends on broken pairs (u, C) where C doubles back over e_-(u).
MorseBottSystem one_interval() {
  MorseBottSystem s;
  add(s.orbits, make_orbit("a", 1, 3));
  add(s.orbits, make_orbit("c", 1, 2));
  add(s.orbits, make_orbit("b", 0, 1));
  s.basepoints = {{"a", q(1, 2)}, {"b", q(1, 2)}, {"c", q(3, 4)}};
  s.m0[{"a", "c"}] = {{q(1, 10), q(3, 10), 1}};
  PLComponent C;
  C.kind = ComponentKind::Circle;
  C.e_plus = pl({{0, 0}, {q(1, 2), q(1, 2)}, {1, 0}});
  C.e_minus = pl({{0, q(6, 10)}, {1, q(6, 10)}});
  C.sign_start = 1;
  s.m1[{"c", "b"}] = {C};
  PLComponent I;
  I.kind = ComponentKind::Interval;
  I.e_plus = pl({{0, q(1, 10)}, {1, q(11, 10)}});
  I.e_minus = pl({{0, q(6, 10)}, {1, q(6, 10)}});
  I.sign_start = -1;
  I.start_label = BoundaryLabel{"c", {Family::M0, 0, std::nullopt}, {Family::M1, 0, q(3, 10)}};
  I.end_label = BoundaryLabel{"c", {Family::M0, 0, std::nullopt}, {Family::M1, 0, q(7, 10)}};
  s.m1[{"a", "b"}] = {I};
  return s;
}

// One interval in m1(a,b) running from a break through c1 (point then circle)
// to a break through c2 (circle then point).
MorseBottSystem interval_pair() {
  MorseBottSystem s;
  add(s.orbits, make_orbit("a", 1, 4));
  add(s.orbits, make_orbit("c1", 1, 3));
  add(s.orbits, make_orbit("c2", 0, 2));
  add(s.orbits, make_orbit("b", 0, 1));
  s.basepoints = {{"a", q(1, 2)}, {"b", q(1, 2)}, {"c1", q(1, 2)}, {"c2", q(1, 2)}};
  s.m0[{"a", "c1"}] = {{q(1, 10), q(3, 10), 1}};
  s.m0[{"c2", "b"}] = {{q(7, 10), q(9, 10), 1}};
  PLComponent C;
  C.e_plus = pl({{0, 0}, {1, 1}});
  C.e_minus = pl({{0, q(6, 10)}, {1, q(6, 10)}});
  s.m1[{"c1", "b"}] = {C};
  PLComponent D;
  D.e_plus = pl({{0, q(2, 10)}, {1, q(2, 10)}});
  D.e_minus = pl({{0, q(1, 20)}, {1, q(21, 20)}});
  s.m1[{"a", "c2"}] = {D};
  PLComponent I;
  I.kind = ComponentKind::Interval;
  I.e_plus = pl({{0, q(1, 10)}, {1, q(2, 10)}});
  I.e_minus = pl({{0, q(6, 10)}, {1, q(9, 10)}});
  I.sign_start = -1;
  I.start_label = BoundaryLabel{"c1", {Family::M0, 0, std::nullopt}, {Family::M1, 0, q(3, 10)}};
  I.end_label = BoundaryLabel{"c2", {Family::M1, 0, q(13, 20)}, {Family::M0, 0, std::nullopt}};
  s.m1[{"a", "b"}] = {I};
  return s;
}

MorseBottSystem bad_orbit() {
  MorseBottSystem s;
  add(s.orbits, make_orbit("h", 0, 1, 2, false));
  s.basepoints = {{"h", 0}};
  return s;
}

// Two maxima, one saddle, one minimum on a sphere; the maxima cancel the saddle
// with opposite signs, so the Morse differential is not zero.
AutonomousData nonperfect_morse() {
  AutonomousData data;
  add(data.orbits, make_orbit("p1", 1, q(7, 2), 2));
  add(data.orbits, make_orbit("p2", 1, 3, 2));
  add(data.orbits, make_orbit("s", 0, 2, 2));
  add(data.orbits, make_orbit("m", -1, 1, 2));
  data.mj1[{"p1", "s"}] = {{1, 2}};
  data.mj1[{"p2", "s"}] = {{-1, 1}};
  data.extra[{"check(p1)", "hat(m)"}] = 2;
  data.extra[{"check(p2)", "hat(m)"}] = 2;
  return data;
}

AutonomousData bad_pair() {
  AutonomousData data;
  add(data.orbits, make_orbit("H", 2, 2, 2, false));
  add(data.orbits, make_orbit("K", 1, 1, 2, false));
  data.extra[{"hat(H)", "hat(K)"}] = 1;
  data.extra[{"check(H)", "check(K)"}] = -1;
  return data;
}

// A cobordism from one orbit a to a target with a circle C in m1(c,b): a
// point w in phi0(a,c) breaks against C twice, bounding an interval in phi1(a,b).
MorphismData phi_interval() {
  MorphismData m;
  add(m.source.orbits, make_orbit("a", 0, 3));
  m.source.basepoints = {{"a", q(1, 2)}};
  add(m.target.orbits, make_orbit("c", 1, 2));
  add(m.target.orbits, make_orbit("b", 0, 1));
  m.target.basepoints = {{"c", q(3, 4)}, {"b", q(1, 2)}};
  PLComponent C;
  C.e_plus = pl({{0, 0}, {q(1, 2), q(1, 2)}, {1, 0}});
  C.e_minus = pl({{0, q(1, 10)}, {1, q(11, 10)}});
  m.target.m1[{"c", "b"}] = {C};
  m.phi0[{"a", "c"}] = {{q(1, 10), q(3, 10), 1}};
  PLComponent I;
  I.kind = ComponentKind::Interval;
  I.e_plus = pl({{0, q(1, 10)}, {1, q(1, 10)}});
  I.e_minus = pl({{0, q(4, 10)}, {1, q(8, 10)}});
  I.sign_start = 1;
  I.start_label = BoundaryLabel{"c", {Family::Phi0, 0, std::nullopt}, {Family::M1, 0, q(3, 10)}};
  I.end_label = BoundaryLabel{"c", {Family::Phi0, 0, std::nullopt}, {Family::M1, 0, q(7, 10)}};
  m.phi1[{"a", "b"}] = {I};
  return m;
}

Fixture mbs_fixture(const std::string& name, MorseBottSystem s) {
  Fixture f;
  f.name = name;
  f.kind = FixtureKind::Mbs;
  f.mbs = std::move(s);
  return f;
}

Fixture autonomous_fixture(const std::string& name, AutonomousData d) {
  Fixture f;
  f.name = name;
  f.kind = FixtureKind::Autonomous;
  f.autonomous = std::move(d);
  return f;
}

Fixture morphism_fixture(const std::string& name, MorphismData m) {
  Fixture f;
  f.name = name;
  f.kind = FixtureKind::Morphism;
  f.morphism = std::move(m);
  return f;
}

const std::vector<std::pair<std::string, std::function<Fixture()>>>& registry() {
  static const std::vector<std::pair<std::string, std::function<Fixture()>>> r = {
      {"empty", [] { return mbs_fixture("empty", MorseBottSystem{}); }},
      {"bad-orbit", [] { return mbs_fixture("bad-orbit", bad_orbit()); }},
      {"one-interval", [] { return mbs_fixture("one-interval", one_interval()); }},
      {"interval-pair", [] { return mbs_fixture("interval-pair", interval_pair()); }},
      {"prequantization-mbs",
       [] { return mbs_fixture("prequantization-mbs", realize_as_system(prequantization(1, 2, 1))); }},
      {"period-doubling-plus-mbs",
       [] { return mbs_fixture("period-doubling-plus-mbs", realize_as_system(period_doubling(PDSide::Plus, 1))); }},
      {"nonperfect-morse-mbs",
       [] { return mbs_fixture("nonperfect-morse-mbs", realize_as_system(nonperfect_morse())); }},
      {"prequantization", [] { return autonomous_fixture("prequantization", prequantization(1, 1, 2)); }},
      {"period-doubling-minus",
       [] { return autonomous_fixture("period-doubling-minus", period_doubling(PDSide::Minus)); }},
      {"period-doubling-plus",
       [] { return autonomous_fixture("period-doubling-plus", period_doubling(PDSide::Plus, 1)); }},
      {"nonperfect-morse", [] { return autonomous_fixture("nonperfect-morse", nonperfect_morse()); }},
      {"bad-pair", [] { return autonomous_fixture("bad-pair", bad_pair()); }},
      {"trivial-cobordism",
       [] {
         return morphism_fixture("trivial-cobordism",
                                 trivial_cobordism(realize_as_system(period_doubling(PDSide::Plus, 1))));
       }},
      {"trivial-cobordism-composite",
       [] {
         MorphismData f = trivial_cobordism(interval_pair());
         MorphismData g = trivial_cobordism(f.target);
         return morphism_fixture("trivial-cobordism-composite", compose(f, g));
       }},
      {"phi-interval", [] { return morphism_fixture("phi-interval", phi_interval()); }},
  };
  return r;
}

} // namespace

std::vector<std::string> fixture_names() {
  std::vector<std::string> out;
  for (const auto& [name, make] : registry()) out.push_back(name);
  return out;
}

Fixture fixture(const std::string& name) {
  for (const auto& [n, make] : registry())
    if (n == name) return make();
  throw UnknownFixture("unknown fixture: " + name);
}

std::optional<std::string> rejection(const Fixture& f) {
  try {
    switch (f.kind) {
    case FixtureKind::Mbs: {
      auto r = validate_system(*f.mbs);
      if (!r.ok()) return r.violations.front().code;
      (void)homology(build_ncc(*f.mbs));
      break;
    }
    case FixtureKind::Autonomous: {
      auto r = validate_autonomous(*f.autonomous);
      if (!r.ok()) return r.violations.front().code;
      (void)block_differential(*f.autonomous);
      break;
    }
    case FixtureKind::Morphism: {
      auto r = validate_morphism(*f.morphism);
      if (!r.ok()) return r.violations.front().code;
      (void)homology(build_ncc(f.morphism->source));
      (void)homology(build_ncc(f.morphism->target));
      (void)induced_chain_map(*f.morphism);
      break;
    }
    }
  } catch (const SquareNonzero&) {
    return std::string("SquareNonzero");
  } catch (const ChainMapFailure&) {
    return std::string("ChainMapFailure");
  } catch (const NonGenericConfiguration&) {
    return std::string("NonGenericConfiguration");
  }
  return std::nullopt;
}

const char* mutation_name(MutationKind k) {
  switch (k) {
  case MutationKind::ParityBreak: return "parity-break";
  case MutationKind::ActionBreak: return "action-break";
  case MutationKind::BasepointCollision: return "basepoint-collision";
  case MutationKind::OddWindingBadCircle: return "odd-winding-bad-circle";
  case MutationKind::LabelSignFlip: return "label-sign-flip";
  case MutationKind::LabelEvalMismatch: return "label-eval-mismatch";
  case MutationKind::MissingBrokenPair: return "missing-broken-pair";
  case MutationKind::ExtraSlot: return "extra-slot";
  case MutationKind::DuNonDivisor: return "du-non-divisor";
  case MutationKind::SquareBreakingExtra: return "square-breaking-extra";
  }
  return "?";
}

namespace {

// ------------------------------------------------------------- corruptions

void break_parity(std::map<std::string, Orbit>& orbits) {
  if (orbits.empty()) {
    Orbit o = make_orbit("x", 0, 1);
    o.parity = 1;
    orbits["x"] = o;
    return;
  }
  Orbit& o = orbits.begin()->second;
  o.parity = 1 - o.parity;
}

// First pair carrying data, in map order.
template <class M>
std::optional<OrbitPair> first_pair(const M& m) {
  for (const auto& [p, v] : m)
    if (!v.empty()) return p;
  return std::nullopt;
}

bool break_action(MorseBottSystem& s) {
  auto p = first_pair(s.m0);
  if (!p) p = first_pair(s.m1);
  if (!p)
    for (const auto& [pair, n] : s.m2cc)
      if (n != 0) p = pair;
  if (!p) return false;
  s.orbits.at(p->second).action = s.orbits.at(p->first).action;
  return true;
}

bool collide_basepoint(MorseBottSystem& s) {
  for (const auto& [id, o] : s.orbits) {
    auto v = evaluation_values(s, id);
    if (!v.empty()) {
      s.basepoints[id] = v.front();
      return true;
    }
  }
  return false;
}

void add_turn(PLMap& m) {
  m.points.back().value += 1;
}

bool odd_winding(std::map<OrbitPair, std::vector<PLComponent>>& m1,
                 const std::function<bool(const std::string&)>& plus_bad,
                 const std::function<bool(const std::string&)>& minus_bad) {
  for (auto& [pair, comps] : m1)
    for (auto& c : comps) {
      if (c.kind != ComponentKind::Circle) continue;
      if (plus_bad(pair.first)) {
        add_turn(c.e_plus);
        return true;
      }
      if (minus_bad(pair.second)) {
        add_turn(c.e_minus);
        return true;
      }
    }
  return false;
}

PLComponent* first_interval(std::map<OrbitPair, std::vector<PLComponent>>& m1) {
  for (auto& [pair, comps] : m1)
    for (auto& c : comps)
      if (c.kind == ComponentKind::Interval) return &c;
  return nullptr;
}

bool drop_interval(std::map<OrbitPair, std::vector<PLComponent>>& m1) {
  for (auto& [pair, comps] : m1)
    for (std::size_t i = comps.size(); i-- > 0;)
      if (comps[i].kind == ComponentKind::Interval) {
        comps.erase(comps.begin() + static_cast<long>(i));
        return true;
      }
  return false;
}

void shift_start(PLComponent& c) {
  c.e_minus.points.front().value += Rat(1, 1009);
}

std::optional<GeneratorPair> some_pair(const AutonomousData& d) {
  for (const auto& [a, oa] : d.orbits)
    for (const auto& [b, ob] : d.orbits)
      if (a != b && oa.action > ob.action) return GeneratorPair{a, b};
  return std::nullopt;
}

bool square_breaks(const AutonomousData& d) {
  if (!validate_autonomous(d).ok()) return false;
  try {
    (void)block_differential(d);
  } catch (const SquareNonzero&) {
    return true;
  }
  return false;
}

// Smallest added input, in a fixed search order, that passes validation but
// makes the assembled differential fail to square to zero.
std::optional<AutonomousData> square_breaking(const AutonomousData& base) {
  std::vector<std::string> gens;
  for (const auto& [id, o] : base.orbits) {
    gens.push_back("check(" + id + ")");
    gens.push_back("hat(" + id + ")");
  }
  for (int v : {1, -1})
    for (const auto& s : gens)
      for (const auto& t : gens) {
        AutonomousData d = base;
        d.extra[{s, t}] += v;
        if (square_breaks(d)) return d;
      }
  std::vector<OrbitPair> good_pairs;
  for (const auto& [a, oa] : base.orbits)
    for (const auto& [b, ob] : base.orbits)
      if (a != b && oa.good && ob.good) good_pairs.push_back({a, b});
  for (const auto& p : good_pairs) {
    AutonomousData d = base;
    d.mj1[p].push_back({1, 1});
    if (square_breaks(d)) return d;
  }
  for (const auto& p : good_pairs)
    for (const auto& r : good_pairs) {
      if (p.second != r.first) continue;
      AutonomousData d = base;
      d.mj1[p].push_back({1, 1});
      d.mj1[r].push_back({1, 1});
      if (square_breaks(d)) return d;
    }
  return std::nullopt;
}

void scale_actions(MorseBottSystem& s, const Rat& k) {
  for (auto& [id, o] : s.orbits) o.action *= k;
}

} // namespace

std::vector<Mutation> mutations(const std::string& name) {
  const Fixture base = fixture(name);
  std::vector<Mutation> out;
  auto emit = [&](MutationKind k, const std::string& code, Fixture f) {
    f.name = base.name + "/" + mutation_name(k);
    out.push_back({k, code, std::move(f)});
  };
  using MK = MutationKind;

  if (base.kind == FixtureKind::Mbs) {
    const MorseBottSystem& s = *base.mbs;
    {
      Fixture f = base;
      break_parity(f.mbs->orbits);
      if (s.orbits.empty()) f.mbs->basepoints["x"] = 0;
      emit(MK::ParityBreak, "orbit.grading_parity", f);
    }
    if (Fixture f = base; break_action(*f.mbs)) emit(MK::ActionBreak, "action.nondecreasing", f);
    if (Fixture f = base; collide_basepoint(*f.mbs)) emit(MK::BasepointCollision, "genericity.basepoint", f);
    {
      Fixture f = base;
      auto bad = [&](const std::string& id) { return !s.orbits.at(id).good; };
      if (odd_winding(f.mbs->m1, bad, bad)) emit(MK::OddWindingBadCircle, "orientability.circle", f);
    }
    if (Fixture f = base; auto* c = first_interval(f.mbs->m1)) {
      c->sign_start = -c->sign_start;
      emit(MK::LabelSignFlip, "boundary.sign", f);
    }
    if (Fixture f = base; auto* c = first_interval(f.mbs->m1)) {
      shift_start(*c);
      emit(MK::LabelEvalMismatch, "boundary.eval_mismatch", f);
    }
    if (Fixture f = base; drop_interval(f.mbs->m1)) emit(MK::MissingBrokenPair, "boundary.missing_pair", f);
    return out;
  }

  if (base.kind == FixtureKind::Autonomous) {
    const AutonomousData& d = *base.autonomous;
    {
      Fixture f = base;
      break_parity(f.autonomous->orbits);
      emit(MK::ParityBreak, "orbit.grading_parity", f);
    }
    {
      Fixture f = base;
      std::optional<OrbitPair> p = first_pair(d.mj1);
      if (!p)
        for (const auto& [key, v] : d.extra)
          if (v != 0) {
            auto s = parse_generator(key.first), t = parse_generator(key.second);
            if (s && t) p = OrbitPair{s->orbit, t->orbit};
            break;
          }
      if (p) {
        f.autonomous->orbits.at(p->second).action = d.orbits.at(p->first).action;
        emit(MK::ActionBreak, "action.nondecreasing", f);
      }
    }
    if (!d.orbits.empty()) {
      Fixture f = base;
      const std::string& id = d.orbits.begin()->first;
      f.autonomous->extra[{"hat(" + id + ")", "check(" + id + ")"}] = 1;
      emit(MK::ExtraSlot, "extra.slot", f);
    }
    if (auto p = d.mj1.empty() ? some_pair(d) : std::optional<GeneratorPair>(d.mj1.begin()->first)) {
      Fixture f = base;
      long g = std::gcd(d.orbits.at(p->first).d, d.orbits.at(p->second).d);
      f.autonomous->mj1[*p].push_back({1, g + 1});
      emit(MK::DuNonDivisor, "record.du_divisibility", f);
    }
    if (auto broken = square_breaking(d)) {
      Fixture f = base;
      f.autonomous = *broken;
      emit(MK::SquareBreakingExtra, "SquareNonzero", f);
    }
    return out;
  }

  const MorphismData& m = *base.morphism;
  {
    Fixture f = base;
    break_parity(f.morphism->source.orbits);
    emit(MK::ParityBreak, "orbit.grading_parity", f);
  }
  {
    Fixture f = base;
    scale_actions(f.morphism->target, 2); // every target action now exceeds its source partner
    bool any = false;
    for (const auto& [p, v] : m.phi0) any = any || !v.empty();
    for (const auto& [p, v] : m.phi1) any = any || !v.empty();
    if (any) emit(MK::ActionBreak, "action.increase", f);
  }
  if (Fixture f = base; collide_basepoint(f.morphism->source))
    emit(MK::BasepointCollision, "genericity.basepoint", f);
  {
    Fixture f = base;
    auto src_bad = [&](const std::string& id) { return !m.source.orbits.at(id).good; };
    auto tgt_bad = [&](const std::string& id) { return !m.target.orbits.at(id).good; };
    if (odd_winding(f.morphism->phi1, src_bad, tgt_bad)) emit(MK::OddWindingBadCircle, "orientability.circle", f);
  }
  if (Fixture f = base; auto* c = first_interval(f.morphism->phi1)) {
    c->sign_start = -c->sign_start;
    emit(MK::LabelSignFlip, "boundary.sign", f);
  }
  if (Fixture f = base; auto* c = first_interval(f.morphism->phi1)) {
    shift_start(*c);
    emit(MK::LabelEvalMismatch, "boundary.eval_mismatch", f);
  }
  if (Fixture f = base; drop_interval(f.morphism->phi1)) emit(MK::MissingBrokenPair, "boundary.missing_pair", f);
  return out;
}

} // namespace cascadeho
