#include "cascadeho/mbs.hpp"

#include "cascadeho/errors.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <tuple>

namespace cascadeho {

Rat frac(const Rat& x) {
  Int fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return x - Rat(fl);
}

namespace {

Int floor_of(const Rat& x) {
  Int fl;
  mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return fl;
}

Int ceil_of(const Rat& x) {
  Int c;
  mpz_cdiv_q(c.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
  return c;
}

int sgn(const Rat& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

} // namespace

Rat PLMap::eval(const Rat& t) const {
  if (points.empty()) throw std::invalid_argument("empty PL map");
  if (t <= points.front().t) return points.front().value;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const auto& a = points[i];
    const auto& b = points[i + 1];
    if (t <= b.t) return a.value + (b.value - a.value) * (t - a.t) / (b.t - a.t);
  }
  return points.back().value;
}

Rat PLMap::slope_at(const Rat& t) const {
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const auto& a = points[i];
    const auto& b = points[i + 1];
    if (a.t < t && t < b.t) return (b.value - a.value) / (b.t - a.t);
  }
  throw NonRegularValue("parameter " + to_string(t) + " is not inside a segment");
}

Rat PLMap::winding() const {
  if (points.empty()) return 0;
  return points.back().value - points.front().value;
}

const char* family_name(Family f) {
  switch (f) {
  case Family::M0: return "m0";
  case Family::M1: return "m1";
  case Family::Phi0: return "phi0";
  case Family::Phi1: return "phi1";
  }
  return "?";
}

const Orbit& MorseBottSystem::orbit(const std::string& id) const {
  auto it = orbits.find(id);
  if (it == orbits.end()) throw std::out_of_range("unknown orbit '" + id + "'");
  return it->second;
}

CirclePoint MorseBottSystem::basepoint(const std::string& id) const {
  auto it = basepoints.find(id);
  if (it == basepoints.end()) throw std::out_of_range("no basepoint for orbit '" + id + "'");
  return it->second;
}

Frame frame_for(const MorseBottSystem& plus_sys, const std::string& plus,
                const MorseBottSystem& minus_sys, const std::string& minus) {
  Frame f;
  f.bad_plus = !plus_sys.orbit(plus).good;
  f.bad_minus = !minus_sys.orbit(minus).good;
  f.p_plus = plus_sys.basepoint(plus);
  f.p_minus = minus_sys.basepoint(minus);
  return f;
}

Frame frame_for(const MorseBottSystem& sys, const OrbitPair& pair) {
  return frame_for(sys, pair.first, sys, pair.second);
}

std::vector<Crossing> crossings(const PLMap& map, ComponentKind kind, const CirclePoint& q) {
  (void)kind; // circles are sampled over one period [0,1); t = 1 repeats t = 0
  std::vector<Crossing> out;
  const CirclePoint qq = frac(q);
  for (const auto& bp : map.points)
    if (frac(bp.value) == qq)
      throw NonRegularValue("value " + to_string(qq) + " is a breakpoint image");
  for (std::size_t i = 0; i + 1 < map.points.size(); ++i) {
    const auto& a = map.points[i];
    const auto& b = map.points[i + 1];
    if (a.value == b.value) continue; // constant away from q (breakpoints checked above)
    Rat lo = std::min(a.value, b.value), hi = std::max(a.value, b.value);
    Int n0 = floor_of(lo - qq) + 1, n1 = ceil_of(hi - qq) - 1;
    int dir = b.value > a.value ? 1 : -1;
    for (Int n = n0; n <= n1; ++n) {
      Rat target = qq + Rat(n);
      Rat t = a.t + (target - a.value) * (b.t - a.t) / (b.value - a.value);
      out.push_back({t, dir});
    }
  }
  std::sort(out.begin(), out.end(), [](const Crossing& x, const Crossing& y) { return x.t < y.t; });
  return out;
}

int orientation_at(const PLComponent& comp, const Frame& frame, const Rat& t,
                   std::optional<Side> constrained, int crossing_dir) {
  (void)crossing_dir;
  long flips = 0;
  auto count = [&](Side side, const PLMap& map, const CirclePoint& p) {
    for (const auto& x : crossings(map, comp.kind, p)) {
      if (x.t < t) {
        ++flips;
      } else if (x.t == t) {
        if (constrained != side)
          throw NonGenericConfiguration("both evaluation maps meet their basepoints at t = " +
                                        to_string(t));
        if (x.dir > 0) ++flips;
      }
    }
  };
  if (frame.bad_plus) count(Side::Plus, comp.e_plus, frame.p_plus);
  if (frame.bad_minus) count(Side::Minus, comp.e_minus, frame.p_minus);
  return (flips % 2 == 0) ? comp.sign_start : -comp.sign_start;
}

int orientation_at_end(const PLComponent& comp, const Frame& frame) {
  long flips = 0;
  if (frame.bad_plus) flips += static_cast<long>(crossings(comp.e_plus, comp.kind, frame.p_plus).size());
  if (frame.bad_minus)
    flips += static_cast<long>(crossings(comp.e_minus, comp.kind, frame.p_minus).size());
  return (flips % 2 == 0) ? comp.sign_start : -comp.sign_start;
}

std::vector<Preimage> signed_preimages(const PLComponent& comp, Side side, const CirclePoint& q,
                                       const Frame& frame) {
  const PLMap& map = side == Side::Plus ? comp.e_plus : comp.e_minus;
  const PLMap& other = side == Side::Plus ? comp.e_minus : comp.e_plus;
  std::vector<Preimage> out;
  for (const auto& x : crossings(map, comp.kind, q)) {
    // A crossing of the basepoint on the constrained side is read with the
    // constraint convention; any other coincidence at this t is non-generic.
    bool on_own_basepoint = side == Side::Plus ? (frame.bad_plus && frac(q) == frac(frame.p_plus))
                                               : (frame.bad_minus && frac(q) == frac(frame.p_minus));
    int o = orientation_at(comp, frame, x.t, on_own_basepoint ? std::optional<Side>(side)
                                                               : std::nullopt,
                           x.dir);
    out.push_back({x.t, frac(other.eval(x.t)), x.dir * o});
  }
  return out;
}

bool cyclically_ordered(const CirclePoint& p, const CirclePoint& a, const CirclePoint& b) {
  Rat pp = frac(p), aa = frac(a), bb = frac(b);
  if (pp == aa || pp == bb || aa == bb)
    throw NonDistinct("coincident points " + to_string(pp) + ", " + to_string(aa) + ", " +
                      to_string(bb));
  return frac(aa - pp) < frac(bb - pp);
}

int transport_sign(const Orbit& orbit, int raw, long windings) {
  if (orbit.good) return raw;
  return (windings % 2 == 0) ? raw : -raw;
}

bool ValidationReport::has(const std::string& code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.code == code; });
}

void ValidationReport::merge(const ValidationReport& o, const std::string& prefix) {
  for (const auto& v : o.violations) violations.push_back({v.code, prefix + v.location, v.message});
}

std::string pair_name(const OrbitPair& p) { return p.first + "->" + p.second; }

ValidationReport validate_orbits(const std::map<std::string, Orbit>& orbits,
                                 const GradingMode& mode, const std::string& where) {
  ValidationReport r;
  if (mode.kind == GradingMode::Kind::Modular && (mode.modulus < 2 || mode.modulus % 2 != 0))
    r.add("system.grading_modulus", where + "grading_modulus",
          "modulus must be an even integer >= 2");
  for (const auto& [id, o] : orbits) {
    std::string loc = where + "orbits[" + id + "]";
    if (o.id != id) r.add("orbit.id", loc, "orbit id does not match its key");
    if (o.d < 1) r.add("orbit.multiplicity", loc, "multiplicity must be positive");
    if (!o.good && o.d % 2 != 0)
      r.add("orbit.bad_odd_multiplicity", loc, "bad orbits are even multiple covers");
    if (o.parity != 0 && o.parity != 1) r.add("orbit.parity", loc, "parity must be 0 or 1");
    if (!(o.action > 0)) r.add("orbit.action", loc, "action must be positive");
    if (o.grading) {
      long g = *o.grading;
      if (((g % 2) + 2) % 2 != o.parity)
        r.add("orbit.grading_parity", loc, "grading and parity disagree mod 2");
    } else if (mode.kind != GradingMode::Kind::Parity) {
      r.add("orbit.missing_grading", loc, "integer or modular grading requires a grading");
    }
  }
  return r;
}

namespace {

bool valid_plmap(const PLMap& m, std::string& why) {
  if (m.points.size() < 2) {
    why = "needs at least two breakpoints";
    return false;
  }
  if (m.points.front().t != 0 || m.points.back().t != 1) {
    why = "breakpoints must span t = 0 .. 1";
    return false;
  }
  for (std::size_t i = 0; i + 1 < m.points.size(); ++i)
    if (!(m.points[i].t < m.points[i + 1].t)) {
      why = "breakpoints must be strictly increasing in t";
      return false;
    }
  return true;
}

// Grading rule shared by moduli and cobordism pieces: |γ₊| − |γ₋| + shift = d.
void check_grading(ValidationReport& r, const GradingMode& mode, const Orbit& plus,
                   const Orbit& minus, long d, long shift, const std::string& loc,
                   const char* code) {
  long want = d - shift;
  if (((plus.parity - minus.parity - want) % 2 + 2) % 2 != 0) {
    r.add(code, loc, "parity difference is not " + std::to_string(want) + " mod 2");
    return;
  }
  if (mode.kind != GradingMode::Kind::Parity && plus.grading && minus.grading) {
    long diff = *plus.grading - *minus.grading;
    if (mode.normalize(diff) != mode.normalize(want))
      r.add(code, loc,
            "grading difference " + std::to_string(diff) + " does not equal " + std::to_string(want));
  }
}

} // namespace

std::vector<CirclePoint> evaluation_values(const MorseBottSystem& sys, const std::string& orbit) {
  std::vector<CirclePoint> out;
  for (const auto& [pair, pts] : sys.m0)
    for (const auto& p : pts) {
      if (pair.first == orbit) out.push_back(frac(p.e_plus));
      if (pair.second == orbit) out.push_back(frac(p.e_minus));
    }
  for (const auto& [pair, comps] : sys.m1)
    for (const auto& c : comps) {
      if (pair.first == orbit)
        for (const auto& bp : c.e_plus.points) out.push_back(frac(bp.value));
      if (pair.second == orbit)
        for (const auto& bp : c.e_minus.points) out.push_back(frac(bp.value));
    }
  return out;
}

bool basepoint_generic(const MorseBottSystem& sys, const std::string& orbit, const CirclePoint& p) {
  CirclePoint q = frac(p);
  for (const auto& v : evaluation_values(sys, orbit))
    if (v == q) return false;
  try {
    for (const auto& [pair, comps] : sys.m1)
      for (const auto& c : comps) {
        if (pair.first == orbit) (void)crossings(c.e_plus, c.kind, q);
        if (pair.second == orbit) (void)crossings(c.e_minus, c.kind, q);
      }
  } catch (const NonRegularValue&) {
    return false;
  }
  return true;
}

namespace {

long nth_prime(std::size_t n) {
  std::vector<long> ps;
  for (long k = 2; ps.size() <= n; ++k) {
    bool prime = true;
    for (long p : ps) {
      if (p * p > k) break;
      if (k % p == 0) {
        prime = false;
        break;
      }
    }
    if (prime) ps.push_back(k);
  }
  return ps[n];
}

} // namespace

MorseBottSystem with_default_basepoints(MorseBottSystem sys) {
  std::size_t index = 0;
  for (const auto& [id, o] : sys.orbits) {
    if (!sys.basepoints.count(id)) {
      CirclePoint p = 0;
      for (std::size_t k = 0; !basepoint_generic(sys, id, p); ++k)
        p = Rat(1, 2 * nth_prime(index + k));
      sys.basepoints[id] = p;
    }
    ++index;
  }
  return sys;
}

MorseBottSystem with_random_basepoints(MorseBottSystem sys, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const long P = 1000003; // prime denominator keeps draws off dyadic fixture data
  std::uniform_int_distribution<long> draw(1, P - 1);
  for (const auto& [id, o] : sys.orbits) {
    CirclePoint p;
    do {
      p = Rat(draw(rng), P);
    } while (!basepoint_generic(sys, id, p));
    sys.basepoints[id] = p;
  }
  return sys;
}

namespace {

struct PairKey {
  std::string via;
  int upper_family, lower_family;
  std::size_t upper_index, lower_index;
  Rat t;
  bool operator<(const PairKey& o) const {
    return std::tie(via, upper_family, lower_family, upper_index, lower_index, t) <
           std::tie(o.via, o.upper_family, o.lower_family, o.upper_index, o.lower_index, o.t);
  }
};

} // namespace

ValidationReport validate_system(const MorseBottSystem& sys) {
  ValidationReport r = validate_orbits(sys.orbits, sys.mode);

  auto known = [&](const OrbitPair& p) { return sys.orbits.count(p.first) && sys.orbits.count(p.second); };
  bool structural_ok = true;
  for (const auto& [id, o] : sys.orbits) {
    auto it = sys.basepoints.find(id);
    if (it == sys.basepoints.end()) {
      r.add("basepoint.missing", "basepoints[" + id + "]", "no basepoint");
      structural_ok = false;
    } else if (it->second < 0 || it->second >= 1) {
      r.add("basepoint.range", "basepoints[" + id + "]", "basepoint must lie in [0,1)");
      structural_ok = false;
    }
  }
  for (const auto& [id, p] : sys.basepoints)
    if (!sys.orbits.count(id)) r.add("system.unknown_orbit", "basepoints[" + id + "]", "unknown orbit");

  auto check_pair = [&](const OrbitPair& pair, const std::string& loc) {
    if (!known(pair)) {
      r.add("system.unknown_orbit", loc, "pair references an unknown orbit");
      structural_ok = false;
      return false;
    }
    if (pair.first == pair.second) {
      r.add("system.self_pair", loc, "moduli sets join distinct orbits");
      structural_ok = false;
      return false;
    }
    return true;
  };
  for (const auto& [pair, pts] : sys.m0) {
    std::string loc = "m0[" + pair_name(pair) + "]";
    check_pair(pair, loc);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& p = pts[i];
      if (p.sign != 1 && p.sign != -1) r.add("point.sign", loc + "[" + std::to_string(i) + "]", "sign must be +1 or -1");
      if (p.e_plus < 0 || p.e_plus >= 1 || p.e_minus < 0 || p.e_minus >= 1)
        r.add("point.range", loc + "[" + std::to_string(i) + "]", "evaluation values must lie in [0,1)");
    }
  }
  for (const auto& [pair, comps] : sys.m1) {
    std::string loc = "m1[" + pair_name(pair) + "]";
    check_pair(pair, loc);
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const auto& c = comps[i];
      std::string cl = loc + "[" + std::to_string(i) + "]";
      std::string why;
      if (!valid_plmap(c.e_plus, why)) {
        r.add("pl.breakpoints", cl + ".e_plus", why);
        structural_ok = false;
      }
      if (!valid_plmap(c.e_minus, why)) {
        r.add("pl.breakpoints", cl + ".e_minus", why);
        structural_ok = false;
      }
      if (c.sign_start != 1 && c.sign_start != -1) r.add("pl.sign", cl, "sign_start must be +1 or -1");
      if (c.kind == ComponentKind::Circle) {
        if (c.e_plus.winding().get_den() != 1 || c.e_minus.winding().get_den() != 1)
          r.add("pl.winding", cl, "circle lifts must close up with integer winding");
        if (c.start_label || c.end_label) r.add("pl.labels", cl, "circles have no boundary");
      } else if (!c.start_label || !c.end_label) {
        r.add("boundary.missing_label", cl, "interval ends need broken-pair labels");
      }
    }
  }
  for (const auto& [pair, n] : sys.m2cc) check_pair(pair, "m2cc[" + pair_name(pair) + "]");
  if (!structural_ok) return r;

  // (1) parity and grading
  for (const auto& [pair, pts] : sys.m0)
    if (!pts.empty())
      check_grading(r, sys.mode, sys.orbit(pair.first), sys.orbit(pair.second), 0, 0,
                    "m0[" + pair_name(pair) + "]", "grading.mismatch");
  for (const auto& [pair, comps] : sys.m1)
    if (!comps.empty())
      check_grading(r, sys.mode, sys.orbit(pair.first), sys.orbit(pair.second), 1, 0,
                    "m1[" + pair_name(pair) + "]", "grading.mismatch");
  for (const auto& [pair, n] : sys.m2cc)
    if (n != 0)
      check_grading(r, sys.mode, sys.orbit(pair.first), sys.orbit(pair.second), 2, 0,
                    "m2cc[" + pair_name(pair) + "]", "grading.mismatch");

  // (2) action, and homotopy classes
  auto check_action = [&](const OrbitPair& pair, const std::string& loc) {
    const auto& a = sys.orbit(pair.first);
    const auto& b = sys.orbit(pair.second);
    if (!(a.action > b.action)) r.add("action.nondecreasing", loc, "action must strictly decrease");
    if (a.homotopy_class != b.homotopy_class)
      r.add("class.mismatch", loc, "moduli join orbits in different homotopy classes");
  };
  for (const auto& [pair, pts] : sys.m0)
    if (!pts.empty()) check_action(pair, "m0[" + pair_name(pair) + "]");
  for (const auto& [pair, comps] : sys.m1)
    if (!comps.empty()) check_action(pair, "m1[" + pair_name(pair) + "]");
  for (const auto& [pair, n] : sys.m2cc)
    if (n != 0) check_action(pair, "m2cc[" + pair_name(pair) + "]");

  // (3) genericity
  for (const auto& [id, o] : sys.orbits) {
    CirclePoint p = sys.basepoint(id);
    for (const auto& v : evaluation_values(sys, id))
      if (v == p) {
        r.add("genericity.basepoint", "basepoints[" + id + "]",
              "basepoint " + to_string(p) + " equals an evaluation value or breakpoint image");
        break;
      }
  }
  for (const auto& [pair, comps] : sys.m1)
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const auto& c = comps[i];
      std::string cl = "m1[" + pair_name(pair) + "][" + std::to_string(i) + "]";
      std::vector<Crossing> xp, xm;
      try {
        xp = crossings(c.e_plus, c.kind, sys.basepoint(pair.first));
      } catch (const NonRegularValue& e) {
        r.add("genericity.nonregular", cl + ".e_plus", e.what());
      }
      try {
        xm = crossings(c.e_minus, c.kind, sys.basepoint(pair.second));
      } catch (const NonRegularValue& e) {
        r.add("genericity.nonregular", cl + ".e_minus", e.what());
      }
      for (const auto& a : xp)
        for (const auto& b : xm)
          if (a.t == b.t)
            r.add("genericity.double_constraint", cl,
                  "both basepoints are hit at t = " + to_string(a.t));
    }
  // 0-dimensional pieces must not meet head to tail.
  for (const auto& [pin, pts_in] : sys.m0)
    for (const auto& [pout, pts_out] : sys.m0) {
      if (pin.second != pout.first) continue;
      for (const auto& a : pts_in)
        for (const auto& b : pts_out)
          if (a.e_minus == b.e_plus)
            r.add("genericity.coincidence", "m0[" + pair_name(pin) + "]/m0[" + pair_name(pout) + "]",
                  "evaluation points coincide on " + pin.second);
    }

  // (4) circle orientability
  for (const auto& [pair, comps] : sys.m1)
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const auto& c = comps[i];
      if (c.kind != ComponentKind::Circle) continue;
      long wp = c.e_plus.winding().get_den() == 1 ? c.e_plus.winding().get_num().get_si() : 0;
      long wm = c.e_minus.winding().get_den() == 1 ? c.e_minus.winding().get_num().get_si() : 0;
      long flips = (sys.orbit(pair.first).good ? 0 : wp) + (sys.orbit(pair.second).good ? 0 : wm);
      if (flips % 2 != 0)
        r.add("orientability.circle", "m1[" + pair_name(pair) + "][" + std::to_string(i) + "]",
              "local-system monodromy around the circle is -1");
    }

  // (5) boundary consistency
  for (const auto& [pair, comps] : sys.m1) {
    const auto& [gp, gm] = pair;
    std::map<PairKey, int> labelled;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const auto& c = comps[i];
      if (c.kind != ComponentKind::Interval) continue;
      std::string cl = "m1[" + pair_name(pair) + "][" + std::to_string(i) + "]";
      for (int end = 0; end < 2; ++end) {
        const auto& lab = end == 0 ? c.start_label : c.end_label;
        if (!lab) continue;
        std::string el = cl + (end == 0 ? ".start" : ".end");
        const auto& L = *lab;
        bool upper_comp = L.upper.family == Family::M1, lower_comp = L.lower.family == Family::M1;
        auto family_ok = [](Family f) { return f == Family::M0 || f == Family::M1; };
        if (!sys.orbits.count(L.via) || L.via == gp || L.via == gm || !family_ok(L.upper.family) ||
            !family_ok(L.lower.family) || upper_comp == lower_comp) {
          r.add("boundary.bad_reference", el, "label must name one point and one component through a third orbit");
          continue;
        }
        OrbitPair up{gp, L.via}, lo{L.via, gm};
        const SignedPoint* point = nullptr;
        const PLComponent* comp = nullptr;
        auto fetch_point = [&](const OrbitPair& p, std::size_t idx) -> const SignedPoint* {
          auto it = sys.m0.find(p);
          return (it == sys.m0.end() || idx >= it->second.size()) ? nullptr : &it->second[idx];
        };
        auto fetch_comp = [&](const OrbitPair& p, std::size_t idx) -> const PLComponent* {
          auto it = sys.m1.find(p);
          return (it == sys.m1.end() || idx >= it->second.size()) ? nullptr : &it->second[idx];
        };
        const PieceRef& cref = upper_comp ? L.upper : L.lower;
        if (upper_comp) {
          comp = fetch_comp(up, L.upper.index);
          point = fetch_point(lo, L.lower.index);
        } else {
          point = fetch_point(up, L.upper.index);
          comp = fetch_comp(lo, L.lower.index);
        }
        if (!point || !comp || !cref.t || *cref.t < 0 || *cref.t > 1) {
          r.add("boundary.bad_reference", el, "label references a missing piece or parameter");
          continue;
        }
        const Rat& t = *cref.t;
        Rat end_t = end == 0 ? Rat(0) : Rat(1);
        CirclePoint jp = frac(c.e_plus.eval(end_t)), jm = frac(c.e_minus.eval(end_t));
        Frame cf = upper_comp ? frame_for(sys, up) : frame_for(sys, lo);
        bool match;
        int fp = 0;
        try {
          if (upper_comp) {
            match = frac(comp->e_minus.eval(t)) == point->e_plus && jp == frac(comp->e_plus.eval(t)) &&
                    jm == point->e_minus;
            if (match)
              fp = orientation_at(*comp, cf, t) * sgn(comp->e_minus.slope_at(t)) * point->sign;
          } else {
            match = frac(comp->e_plus.eval(t)) == point->e_minus && jp == point->e_plus &&
                    jm == frac(comp->e_minus.eval(t));
            if (match)
              fp = point->sign * orientation_at(*comp, cf, t) * sgn(comp->e_plus.slope_at(t));
          }
        } catch (const std::exception& e) {
          r.add("boundary.nonregular", el, e.what());
          continue;
        }
        if (!match || fp == 0) {
          r.add("boundary.eval_mismatch", el, "evaluation values of the broken pair do not match");
          continue;
        }
        int factor = upper_comp ? -1 : 1; // (-1)^{d_+}
        Frame jf = frame_for(sys, pair);
        int b = end == 0 ? -c.sign_start : orientation_at_end(c, jf);
        if (b != factor * fp)
          r.add("boundary.sign", el, "boundary orientation disagrees with the fiber-product sign");
        PairKey key{L.via, static_cast<int>(L.upper.family), static_cast<int>(L.lower.family),
                    L.upper.index, L.lower.index, t};
        if (++labelled[key] > 1) r.add("boundary.duplicate_pair", el, "broken pair labels two ends");
      }
    }
    (void)labelled;
  }
  // every broken pair must be an interval end
  std::map<OrbitPair, std::map<PairKey, int>> labels_by_pair;
  for (const auto& [pair, comps] : sys.m1)
    for (const auto& c : comps)
      for (const auto* lab : {&c.start_label, &c.end_label})
        if (c.kind == ComponentKind::Interval && *lab) {
          const auto& L = **lab;
          const PieceRef& cref = L.upper.family == Family::M1 ? L.upper : L.lower;
          if (!cref.t) continue;
          labels_by_pair[pair][{L.via, static_cast<int>(L.upper.family),
                                static_cast<int>(L.lower.family), L.upper.index, L.lower.index,
                                *cref.t}]++;
        }
  for (const auto& [gp, o1] : sys.orbits)
    for (const auto& [gm, o2] : sys.orbits) {
      if (gp == gm) continue;
      OrbitPair pair{gp, gm};
      std::set<PairKey> required;
      for (const auto& [via, o0] : sys.orbits) {
        if (via == gp || via == gm) continue;
        auto m0a = sys.m0.find({gp, via});
        auto m1b = sys.m1.find({via, gm});
        if (m0a != sys.m0.end() && m1b != sys.m1.end())
          for (std::size_t i = 0; i < m0a->second.size(); ++i)
            for (std::size_t j = 0; j < m1b->second.size(); ++j) {
              const auto& C = m1b->second[j];
              try {
                for (const auto& x : crossings(C.e_plus, C.kind, m0a->second[i].e_minus))
                  required.insert({via, static_cast<int>(Family::M0), static_cast<int>(Family::M1), i, j, x.t});
              } catch (const NonRegularValue& e) {
                r.add("genericity.fiber_product", "m0[" + pair_name({gp, via}) + "]/m1[" + pair_name({via, gm}) + "]", e.what());
              }
            }
        auto m1a = sys.m1.find({gp, via});
        auto m0b = sys.m0.find({via, gm});
        if (m1a != sys.m1.end() && m0b != sys.m0.end())
          for (std::size_t i = 0; i < m1a->second.size(); ++i)
            for (std::size_t j = 0; j < m0b->second.size(); ++j) {
              const auto& C = m1a->second[i];
              try {
                for (const auto& x : crossings(C.e_minus, C.kind, m0b->second[j].e_plus))
                  required.insert({via, static_cast<int>(Family::M1), static_cast<int>(Family::M0), i, j, x.t});
              } catch (const NonRegularValue& e) {
                r.add("genericity.fiber_product", "m1[" + pair_name({gp, via}) + "]/m0[" + pair_name({via, gm}) + "]", e.what());
              }
            }
      }
      const auto& have = labels_by_pair[pair];
      for (const auto& k : required)
        if (!have.count(k))
          r.add("boundary.missing_pair", "m1[" + pair_name(pair) + "]",
                "broken pair through " + k.via + " at t = " + to_string(k.t) + " is not an interval end");
      for (const auto& [k, n] : have)
        if (!required.count(k))
          r.add("boundary.bad_reference", "m1[" + pair_name(pair) + "]",
                "label through " + k.via + " is not a broken pair");
    }
  return r;
}

} // namespace cascadeho
