#include "cascadeho/morphism.hpp"

#include "cascadeho/errors.hpp"
#include "cascadeho/parallel.hpp"

#include <algorithm>
#include <set>
#include <tuple>

namespace cascadeho {

namespace {

int sgn(const Rat& x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

bool ordered_or_throw(const CirclePoint& p, const CirclePoint& a, const CirclePoint& b,
                      const std::string& orbit) {
  try {
    return cyclically_ordered(p, a, b);
  } catch (const NonDistinct& e) {
    throw NonGenericConfiguration("morphism cascade junction on " + orbit + ": " + e.what());
  }
}

bool action_required(const MorphismData& m, const OrbitPair& p) {
  auto it = m.action_nonincrease.find(p);
  return it == m.action_nonincrease.end() || it->second;
}

// Partial chain in the source system, ending on orbit `at`.
struct Prefix {
  std::vector<CascadePiece> pieces;
  std::string at;
  bool top_pending = false; // check(alpha) with nothing consumed yet
};

void grow_prefixes(const MorseBottSystem& sys, std::vector<CascadePiece>& chain, const std::string& at,
                   std::vector<Prefix>& out) {
  out.push_back({chain, at, false});
  std::optional<CirclePoint> arrived;
  if (!chain.empty()) arrived = chain.back().e_minus;
  for (const auto& [pair, pts] : sys.m0) {
    if (pair.first != at) continue;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (arrived && !ordered_or_throw(sys.basepoint(at), *arrived, pts[i].e_plus, at)) continue;
      chain.push_back({CascadePiece::Kind::Point, at, pair.second, i, std::nullopt, pts[i].e_plus,
                       pts[i].e_minus, Int(pts[i].sign)});
      grow_prefixes(sys, chain, pair.second, out);
      chain.pop_back();
    }
  }
}

std::vector<Prefix> source_prefixes(const MorseBottSystem& sys, const Generator& src) {
  std::vector<Prefix> out;
  std::vector<CascadePiece> chain;
  if (src.flavor == Flavor::Hat) {
    grow_prefixes(sys, chain, src.orbit, out);
    return out;
  }
  out.push_back({{}, src.orbit, true});
  for (const auto& [pair, comps] : sys.m1) {
    if (pair.first != src.orbit) continue;
    Frame f = frame_for(sys, pair);
    for (std::size_t i = 0; i < comps.size(); ++i)
      for (const auto& pre : signed_preimages(comps[i], Side::Plus, sys.basepoint(src.orbit), f)) {
        chain.push_back({CascadePiece::Kind::TopPoint, src.orbit, pair.second, i, pre.t,
                         sys.basepoint(src.orbit), pre.residual, Int(pre.sign)});
        grow_prefixes(sys, chain, pair.second, out);
        chain.pop_back();
      }
  }
  return out;
}

} // namespace

std::vector<MorphismCascade> enumerate_morphism_cascades(const MorphismData& m, const Generator& src,
                                                         const Generator& dst) {
  std::vector<MorphismCascade> out;
  const auto& S = m.source;
  const auto& T = m.target;
  const std::string& beta = dst.orbit;
  const bool hat_end = dst.flavor == Flavor::Hat;

  std::function<void(const std::vector<CascadePiece>&)> emit = [&](const std::vector<CascadePiece>& pieces) {
    MorphismCascade c;
    for (const auto& p : pieces) c.sign *= p.weight;
    c.pieces = pieces;
    out.push_back(std::move(c));
  };
  // after the phi piece lands on target orbit `landed`
  auto finish = [&](std::vector<CascadePiece>& chain, const std::string& landed) {
    if (landed == beta) {
      if (!hat_end) emit(chain);
      return;
    }
    if (!(T.orbit(landed).action > T.orbit(beta).action)) return;
    extend_cascades(T, landed, beta, hat_end, chain, emit);
  };

  if (src.flavor == Flavor::Check && hat_end) {
    auto it = m.phi2cc.find({src.orbit, beta});
    if (it != m.phi2cc.end() && it->second != 0) {
      MorphismCascade c;
      c.pieces.push_back({CascadePiece::Kind::PhiDouble, src.orbit, beta, 0, std::nullopt,
                          S.basepoint(src.orbit), T.basepoint(beta), it->second});
      c.sign = it->second;
      out.push_back(std::move(c));
    }
  }

  for (auto& pre : source_prefixes(S, src)) {
    std::vector<CascadePiece> chain = pre.pieces;
    std::optional<CirclePoint> arrived;
    if (!chain.empty()) arrived = chain.back().e_minus;
    const std::string& g0 = pre.at;

    if (pre.top_pending) {
      // phi1 through the source basepoint. On a bad orbit the local system is
      // read just before the basepoint, which keeps the trivial cobordism the
      // identity on both generators.
      for (const auto& [pair, comps] : m.phi1) {
        if (pair.first != g0) continue;
        Frame f = frame_for(S, pair.first, T, pair.second);
        int side_factor = S.orbit(g0).good ? 1 : -1;
        for (std::size_t i = 0; i < comps.size(); ++i)
          for (const auto& p : signed_preimages(comps[i], Side::Plus, S.basepoint(g0), f)) {
            chain.push_back({CascadePiece::Kind::PhiTop, g0, pair.second, i, p.t, S.basepoint(g0),
                             p.residual, Int(side_factor * p.sign)});
            finish(chain, pair.second);
            chain.pop_back();
          }
      }
      continue;
    }
    for (const auto& [pair, pts] : m.phi0) {
      if (pair.first != g0) continue;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (arrived && !ordered_or_throw(S.basepoint(g0), *arrived, pts[i].e_plus, g0)) continue;
        chain.push_back({CascadePiece::Kind::PhiPoint, g0, pair.second, i, std::nullopt, pts[i].e_plus,
                         pts[i].e_minus, Int(pts[i].sign)});
        finish(chain, pair.second);
        chain.pop_back();
      }
    }
    if (hat_end) {
      auto it = m.phi1.find({g0, beta});
      if (it != m.phi1.end()) {
        Frame f = frame_for(S, g0, T, beta);
        for (std::size_t i = 0; i < it->second.size(); ++i)
          for (const auto& p : signed_preimages(it->second[i], Side::Minus, T.basepoint(beta), f)) {
            if (arrived && !ordered_or_throw(S.basepoint(g0), *arrived, p.residual, g0)) continue;
            chain.push_back({CascadePiece::Kind::PhiBottom, g0, beta, i, p.t, p.residual,
                             T.basepoint(beta), Int(p.sign)});
            emit(chain);
            chain.pop_back();
          }
      }
    }
  }
  return out;
}

IntMatrix chain_map_matrix(const MorphismData& m) {
  auto sg = ncc_generators(m.source);
  auto tg = ncc_generators(m.target);
  IntMatrix phi(tg.size(), sg.size());
  std::vector<std::vector<Int>> column(sg.size(), std::vector<Int>(tg.size()));
  parallel_for(sg.size(), [&](std::size_t j) {
    const Orbit& a = m.source.orbit(sg[j].orbit);
    long ga = m.source.mode.normalize(generator_grading(a, sg[j].flavor));
    for (std::size_t i = 0; i < tg.size(); ++i) {
      const Orbit& b = m.target.orbit(tg[i].orbit);
      if (a.homotopy_class != b.homotopy_class) continue;
      if (m.target.mode.normalize(generator_grading(b, tg[i].flavor)) != m.target.mode.normalize(ga))
        continue;
      Int total = 0;
      for (const auto& c : enumerate_morphism_cascades(m, sg[j], tg[i])) total += c.sign;
      column[j][i] = total;
    }
  });
  for (std::size_t j = 0; j < sg.size(); ++j)
    for (std::size_t i = 0; i < tg.size(); ++i)
      if (column[j][i] != 0) phi.set(i, j, column[j][i]);
  return phi;
}

IntMatrix induced_chain_map(const MorphismData& m) {
  IntMatrix phi = chain_map_matrix(m);
  ChainComplex cs = build_ncc(m.source), ct = build_ncc(m.target);
  IntMatrix defect = ct.differential * phi - phi * cs.differential;
  if (!defect.is_zero()) {
    auto [k, v] = *defect.entries().begin();
    throw ChainMapFailure(cs.generators[k.second].id, ct.generators[k.first].id,
                          "d*phi - phi*d = " + to_string(v));
  }
  return phi;
}

// ---------------------------------------------------------------- validation

namespace {

struct Piece {
  const SignedPoint* point = nullptr;
  const PLComponent* comp = nullptr;
  Frame frame;
  bool phi = false;
};

struct LabelKey {
  bool top;
  std::string via;
  int uf, lf;
  std::size_t ui, li;
  Rat t;
  bool operator<(const LabelKey& o) const {
    return std::tie(top, via, uf, lf, ui, li, t) < std::tie(o.top, o.via, o.uf, o.lf, o.ui, o.li, o.t);
  }
};

template <class V>
const V* lookup(const std::map<OrbitPair, std::vector<V>>& m, const OrbitPair& p, std::size_t i) {
  auto it = m.find(p);
  return (it == m.end() || i >= it->second.size()) ? nullptr : &it->second[i];
}

void check_shift(ValidationReport& r, const MorseBottSystem& S, const MorseBottSystem& T,
                 const OrbitPair& p, long d, const std::string& loc) {
  const Orbit& a = S.orbit(p.first);
  const Orbit& b = T.orbit(p.second);
  long want = d - 1;
  if ((((a.parity - b.parity - want) % 2) + 2) % 2 != 0) {
    r.add("grading.shift", loc, "parity difference must be " + std::to_string(want) + " mod 2");
    return;
  }
  if (T.mode.kind != GradingMode::Kind::Parity && a.grading && b.grading &&
      T.mode.normalize(*a.grading - *b.grading) != T.mode.normalize(want))
    r.add("grading.shift", loc, "grading difference must be " + std::to_string(want));
}

} // namespace

ValidationReport validate_morphism(const MorphismData& m) {
  ValidationReport r;
  const auto& S = m.source;
  const auto& T = m.target;
  r.merge(validate_system(S), "source.");
  r.merge(validate_system(T), "target.");
  if (!r.ok()) return r;

  bool structural_ok = true;
  auto known = [&](const OrbitPair& p, const std::string& loc) {
    if (!S.orbits.count(p.first) || !T.orbits.count(p.second)) {
      r.add("system.unknown_orbit", loc, "pair must join a source orbit to a target orbit");
      structural_ok = false;
      return false;
    }
    return true;
  };
  for (const auto& [p, pts] : m.phi0) {
    std::string loc = "phi0[" + pair_name(p) + "]";
    known(p, loc);
    for (std::size_t i = 0; i < pts.size(); ++i)
      if ((pts[i].sign != 1 && pts[i].sign != -1) || pts[i].e_plus < 0 || pts[i].e_plus >= 1 ||
          pts[i].e_minus < 0 || pts[i].e_minus >= 1)
        r.add("point.range", loc + "[" + std::to_string(i) + "]", "malformed signed point");
  }
  for (const auto& [p, comps] : m.phi1) {
    std::string loc = "phi1[" + pair_name(p) + "]";
    known(p, loc);
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const auto& c = comps[i];
      std::string cl = loc + "[" + std::to_string(i) + "]";
      for (const PLMap* mp : {&c.e_plus, &c.e_minus}) {
        bool ok = mp->points.size() >= 2 && mp->points.front().t == 0 && mp->points.back().t == 1;
        for (std::size_t k = 0; ok && k + 1 < mp->points.size(); ++k) ok = mp->points[k].t < mp->points[k + 1].t;
        if (!ok) {
          r.add("pl.breakpoints", cl, "breakpoints must increase strictly from t = 0 to t = 1");
          structural_ok = false;
        }
      }
      if (c.kind == ComponentKind::Circle &&
          (c.e_plus.winding().get_den() != 1 || c.e_minus.winding().get_den() != 1))
        r.add("pl.winding", cl, "circle lifts must close up with integer winding");
      if (c.kind == ComponentKind::Interval && (!c.start_label || !c.end_label))
        r.add("boundary.missing_label", cl, "interval ends need broken-pair labels");
    }
  }
  for (const auto& [p, n] : m.phi2cc) known(p, "phi2cc[" + pair_name(p) + "]");
  for (const auto& [p, f] : m.action_nonincrease) known(p, "action_nonincrease[" + pair_name(p) + "]");
  if (!structural_ok) return r;

  // grading shift, classes, action
  auto pair_checks = [&](const OrbitPair& p, long d, const std::string& loc) {
    check_shift(r, S, T, p, d, loc);
    const Orbit& a = S.orbit(p.first);
    const Orbit& b = T.orbit(p.second);
    if (a.homotopy_class != b.homotopy_class)
      r.add("class.mismatch", loc, "cobordism pieces must preserve the homotopy class label");
    if (action_required(m, p) && a.action < b.action)
      r.add("action.increase", loc, "action may not increase across the cobordism");
  };
  for (const auto& [p, pts] : m.phi0)
    if (!pts.empty()) pair_checks(p, 0, "phi0[" + pair_name(p) + "]");
  for (const auto& [p, comps] : m.phi1)
    if (!comps.empty()) pair_checks(p, 1, "phi1[" + pair_name(p) + "]");
  for (const auto& [p, n] : m.phi2cc)
    if (n != 0) pair_checks(p, 2, "phi2cc[" + pair_name(p) + "]");

  // genericity against the phi data
  for (const auto& [p, pts] : m.phi0)
    for (const auto& pt : pts) {
      if (pt.e_plus == S.basepoint(p.first))
        r.add("genericity.basepoint", "source.basepoints[" + p.first + "]", "basepoint equals a phi0 evaluation");
      if (pt.e_minus == T.basepoint(p.second))
        r.add("genericity.basepoint", "target.basepoints[" + p.second + "]", "basepoint equals a phi0 evaluation");
    }
  for (const auto& [p, comps] : m.phi1)
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const auto& c = comps[i];
      std::string cl = "phi1[" + pair_name(p) + "][" + std::to_string(i) + "]";
      for (const auto& bp : c.e_plus.points)
        if (frac(bp.value) == S.basepoint(p.first))
          r.add("genericity.basepoint", cl + ".e_plus", "source basepoint is a breakpoint image");
      for (const auto& bp : c.e_minus.points)
        if (frac(bp.value) == T.basepoint(p.second))
          r.add("genericity.basepoint", cl + ".e_minus", "target basepoint is a breakpoint image");
      std::vector<Crossing> xp, xm;
      try {
        xp = crossings(c.e_plus, c.kind, S.basepoint(p.first));
        xm = crossings(c.e_minus, c.kind, T.basepoint(p.second));
      } catch (const NonRegularValue& e) {
        r.add("genericity.nonregular", cl, e.what());
      }
      for (const auto& a : xp)
        for (const auto& b : xm)
          if (a.t == b.t) r.add("genericity.double_constraint", cl, "both basepoints hit at one parameter");
      if (c.kind == ComponentKind::Circle && c.e_plus.winding().get_den() == 1 &&
          c.e_minus.winding().get_den() == 1) {
        long wp = c.e_plus.winding().get_num().get_si(), wm = c.e_minus.winding().get_num().get_si();
        long flips = (S.orbit(p.first).good ? 0 : wp) + (T.orbit(p.second).good ? 0 : wm);
        if (flips % 2 != 0) r.add("orientability.circle", cl, "local-system monodromy around the circle is -1");
      }
    }
  for (const auto& [sp, spts] : S.m0)
    for (const auto& [pp, ppts] : m.phi0)
      if (sp.second == pp.first)
        for (const auto& a : spts)
          for (const auto& b : ppts)
            if (a.e_minus == b.e_plus)
              r.add("genericity.coincidence", "phi0[" + pair_name(pp) + "]", "meets a source m0 point head to tail");
  for (const auto& [pp, ppts] : m.phi0)
    for (const auto& [tp, tpts] : T.m0)
      if (pp.second == tp.first)
        for (const auto& a : ppts)
          for (const auto& b : tpts)
            if (a.e_minus == b.e_plus)
              r.add("genericity.coincidence", "phi0[" + pair_name(pp) + "]", "meets a target m0 point head to tail");

  // boundary consistency of phi1 intervals
  std::map<OrbitPair, std::map<LabelKey, int>> have;
  for (const auto& [pair, comps] : m.phi1) {
    const auto& [gp, gm] = pair;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const auto& c = comps[i];
      if (c.kind != ComponentKind::Interval) continue;
      std::string cl = "phi1[" + pair_name(pair) + "][" + std::to_string(i) + "]";
      for (int end = 0; end < 2; ++end) {
        const auto& lab = end == 0 ? c.start_label : c.end_label;
        if (!lab) continue;
        std::string el = cl + (end == 0 ? ".start" : ".end");
        const BoundaryLabel& L = *lab;
        auto is_m = [](Family f) { return f == Family::M0 || f == Family::M1; };
        auto is_phi = [](Family f) { return f == Family::Phi0 || f == Family::Phi1; };
        bool top = is_m(L.upper.family);
        bool shape = top ? (is_phi(L.lower.family) && S.orbits.count(L.via) && L.via != gp)
                         : (is_phi(L.upper.family) && is_m(L.lower.family) && T.orbits.count(L.via) &&
                            L.via != gm);
        bool upper_comp = L.upper.family == Family::M1 || L.upper.family == Family::Phi1;
        bool lower_comp = L.lower.family == Family::M1 || L.lower.family == Family::Phi1;
        if (!shape || upper_comp == lower_comp) {
          r.add("boundary.bad_reference", el, "label must break through one point and one component");
          continue;
        }
        Piece up, lo;
        auto fetch = [&](const PieceRef& ref, const OrbitPair& p, Piece& out, const Frame& f) {
          out.frame = f;
          out.phi = is_phi(ref.family);
          switch (ref.family) {
          case Family::M0: out.point = lookup((top ? S : T).m0, p, ref.index); break;
          case Family::M1: out.comp = lookup((top ? S : T).m1, p, ref.index); break;
          case Family::Phi0: out.point = lookup(m.phi0, p, ref.index); break;
          case Family::Phi1: out.comp = lookup(m.phi1, p, ref.index); break;
          }
        };
        OrbitPair up_pair{gp, L.via}, lo_pair{L.via, gm};
        Frame up_frame = top ? frame_for(S, gp, S, L.via) : frame_for(S, gp, T, L.via);
        Frame lo_frame = top ? frame_for(S, L.via, T, gm) : frame_for(T, L.via, T, gm);
        fetch(L.upper, up_pair, up, up_frame);
        fetch(L.lower, lo_pair, lo, lo_frame);
        const PieceRef& cref = upper_comp ? L.upper : L.lower;
        if (!(up.point || up.comp) || !(lo.point || lo.comp) || !cref.t || *cref.t < 0 || *cref.t > 1) {
          r.add("boundary.bad_reference", el, "label references a missing piece or parameter");
          continue;
        }
        const Rat& t = *cref.t;
        Rat end_t = end == 0 ? Rat(0) : Rat(1);
        CirclePoint jp = frac(c.e_plus.eval(end_t)), jm = frac(c.e_minus.eval(end_t));
        bool match = false;
        int fp = 0;
        try {
          if (upper_comp) {
            match = frac(up.comp->e_minus.eval(t)) == lo.point->e_plus && jp == frac(up.comp->e_plus.eval(t)) &&
                    jm == lo.point->e_minus;
            if (match)
              fp = orientation_at(*up.comp, up.frame, t) * sgn(up.comp->e_minus.slope_at(t)) * lo.point->sign;
            if (lo.phi) fp = -fp;
          } else {
            match = frac(lo.comp->e_plus.eval(t)) == up.point->e_minus && jp == up.point->e_plus &&
                    jm == frac(lo.comp->e_minus.eval(t));
            if (match)
              fp = up.point->sign * orientation_at(*lo.comp, lo.frame, t) * sgn(lo.comp->e_plus.slope_at(t));
            if (up.phi) fp = -fp;
          }
        } catch (const std::exception& e) {
          r.add("boundary.nonregular", el, e.what());
          continue;
        }
        if (!match || fp == 0) {
          r.add("boundary.eval_mismatch", el, "evaluation values of the broken pair do not match");
          continue;
        }
        int factor = 1;
        if (!top && L.upper.family == Family::Phi1) factor = -1; // (-1)^d for bottom breaking
        Frame jf = frame_for(S, gp, T, gm);
        int b = end == 0 ? -c.sign_start : orientation_at_end(c, jf);
        if (b != factor * fp)
          r.add("boundary.sign", el, "boundary orientation disagrees with the fiber-product sign");
        LabelKey key{top, L.via, static_cast<int>(L.upper.family), static_cast<int>(L.lower.family),
                     L.upper.index, L.lower.index, t};
        if (++have[pair][key] > 1) r.add("boundary.duplicate_pair", el, "broken pair labels two ends");
      }
    }
  }
  // every broken pair must be an interval end
  for (const auto& [gp, o1] : S.orbits)
    for (const auto& [gm, o2] : T.orbits) {
      OrbitPair pair{gp, gm};
      std::set<LabelKey> required;
      auto add_crossings = [&](bool top, const std::string& via, Family uf, Family lf, std::size_t ui,
                               std::size_t li, const PLComponent& comp, bool plus_side, const CirclePoint& q,
                               const std::string& loc) {
        try {
          for (const auto& x : crossings(plus_side ? comp.e_plus : comp.e_minus, comp.kind, q))
            required.insert({top, via, static_cast<int>(uf), static_cast<int>(lf), ui, li, x.t});
        } catch (const NonRegularValue& e) {
          r.add("genericity.fiber_product", loc, e.what());
        }
      };
      for (const auto& [via, o0] : S.orbits) {
        if (via == gp) continue;
        std::string loc = "phi1[" + pair_name(pair) + "] via source " + via;
        if (auto a = S.m0.find({gp, via}); a != S.m0.end())
          if (auto b = m.phi1.find({via, gm}); b != m.phi1.end())
            for (std::size_t i = 0; i < a->second.size(); ++i)
              for (std::size_t j = 0; j < b->second.size(); ++j)
                add_crossings(true, via, Family::M0, Family::Phi1, i, j, b->second[j], true,
                              a->second[i].e_minus, loc);
        if (auto a = S.m1.find({gp, via}); a != S.m1.end())
          if (auto b = m.phi0.find({via, gm}); b != m.phi0.end())
            for (std::size_t i = 0; i < a->second.size(); ++i)
              for (std::size_t j = 0; j < b->second.size(); ++j)
                add_crossings(true, via, Family::M1, Family::Phi0, i, j, a->second[i], false,
                              b->second[j].e_plus, loc);
      }
      for (const auto& [via, o0] : T.orbits) {
        if (via == gm) continue;
        std::string loc = "phi1[" + pair_name(pair) + "] via target " + via;
        if (auto a = m.phi0.find({gp, via}); a != m.phi0.end())
          if (auto b = T.m1.find({via, gm}); b != T.m1.end())
            for (std::size_t i = 0; i < a->second.size(); ++i)
              for (std::size_t j = 0; j < b->second.size(); ++j)
                add_crossings(false, via, Family::Phi0, Family::M1, i, j, b->second[j], true,
                              a->second[i].e_minus, loc);
        if (auto a = m.phi1.find({gp, via}); a != m.phi1.end())
          if (auto b = T.m0.find({via, gm}); b != T.m0.end())
            for (std::size_t i = 0; i < a->second.size(); ++i)
              for (std::size_t j = 0; j < b->second.size(); ++j)
                add_crossings(false, via, Family::Phi1, Family::M0, i, j, a->second[i], false,
                              b->second[j].e_plus, loc);
      }
      const auto& got = have[pair];
      for (const auto& k : required)
        if (!got.count(k))
          r.add("boundary.missing_pair", "phi1[" + pair_name(pair) + "]",
                "broken pair through " + k.via + " at t = " + to_string(k.t) + " is not an interval end");
      for (const auto& [k, n] : got)
        if (!required.count(k))
          r.add("boundary.bad_reference", "phi1[" + pair_name(pair) + "]",
                "label through " + k.via + " is not a broken pair");
    }
  return r;
}

// ---------------------------------------------------------------- constructions

namespace {

// Circle points that a forward basepoint shift on `id` must not pass.
std::vector<CirclePoint> obstacles(const MorseBottSystem& sys, const std::string& id) {
  std::vector<CirclePoint> v = evaluation_values(sys, id);
  for (const auto& [pair, comps] : sys.m1)
    for (const auto& c : comps) {
      Frame f = frame_for(sys, pair);
      if (pair.first == id)
        for (const auto& p : signed_preimages(c, Side::Minus, sys.basepoint(pair.second), f)) v.push_back(p.residual);
      if (pair.second == id)
        for (const auto& p : signed_preimages(c, Side::Plus, sys.basepoint(pair.first), f)) v.push_back(p.residual);
    }
  return v;
}

PLMap constant_map(const CirclePoint& v) { return PLMap{{{Rat(0), v}, {Rat(1), v}}}; }

} // namespace

MorphismData trivial_cobordism(const MorseBottSystem& sys) {
  MorphismData m;
  m.source = sys;
  m.target = sys;
  m.construction = "trivial";
  std::map<std::string, Rat> offset; // circle parameter offset c with e(t) = c + t
  for (const auto& [id, o] : sys.orbits) {
    const CirclePoint p = sys.basepoint(id);
    Rat gap = 1;
    for (const auto& v : obstacles(sys, id)) {
      Rat ahead = frac(v - p);
      if (ahead > 0 && ahead < gap) gap = ahead;
    }
    Rat eps = gap / 2;
    m.target.basepoints[id] = frac(p + eps);
    offset[id] = frac(p + eps / 2);
  }
  for (const auto& [id, o] : sys.orbits) {
    const Rat& c = offset[id];
    PLComponent d;
    d.kind = ComponentKind::Circle;
    d.e_plus = PLMap{{{Rat(0), c}, {Rat(1), c + 1}}};
    d.e_minus = d.e_plus;
    // t = 0 sits between the two basepoints, where the frames of a bad orbit differ
    d.sign_start = o.good ? 1 : -1;
    m.phi1[{id, id}].push_back(d);
  }
  for (const auto& [pair, pts] : sys.m0)
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto& u = pts[i];
      PLComponent j;
      j.kind = ComponentKind::Interval;
      j.e_plus = constant_map(u.e_plus);
      j.e_minus = constant_map(u.e_minus);
      j.sign_start = -u.sign;
      j.start_label = BoundaryLabel{pair.second, {Family::M0, i, std::nullopt},
                                    {Family::Phi1, 0, frac(u.e_minus - offset[pair.second])}};
      j.end_label = BoundaryLabel{pair.first, {Family::Phi1, 0, frac(u.e_plus - offset[pair.first])},
                                  {Family::M0, i, std::nullopt}};
      m.phi1[pair].push_back(j);
    }
  return m;
}

MorphismData compose(const MorphismData& f, const MorphismData& g) {
  if (f.target.basepoints != g.source.basepoints || f.target.orbits.size() != g.source.orbits.size())
    throw std::invalid_argument("compose: target of the first map is not the source of the second");
  // Gluing a cylinder reproduces the other factor's moduli with the cylinder's
  // far-end basepoints. That is only usable when the moved basepoints stay generic.
  auto generic = [](MorphismData out) {
    for (const auto& v : validate_morphism(out).violations)
      if (v.code.rfind("genericity.", 0) == 0)
        throw NonGenericConfiguration("composite is not generic: " + v.location + ": " + v.message);
    return out;
  };
  if (g.construction == "trivial") {
    MorphismData out = f;
    out.target = g.target;
    return generic(std::move(out));
  }
  if (f.construction == "trivial") {
    MorphismData out = g;
    out.source = f.source;
    return generic(std::move(out));
  }
  throw Unsupported("composition needs one factor to be a trivial cobordism");
}

} // namespace cascadeho
