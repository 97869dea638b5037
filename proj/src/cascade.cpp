#include "cascadeho/cascade.hpp"

#include "cascadeho/errors.hpp"
#include "cascadeho/parallel.hpp"

#include <algorithm>
#include <functional>

namespace cascadeho {

std::string Generator::id() const {
  return (flavor == Flavor::Check ? "check(" : "hat(") + orbit + ")";
}

std::optional<Generator> parse_generator(const std::string& id) {
  auto take = [&](const std::string& head, Flavor f) -> std::optional<Generator> {
    if (id.size() > head.size() + 1 && id.compare(0, head.size(), head) == 0 && id.back() == ')')
      return Generator{id.substr(head.size(), id.size() - head.size() - 1), f};
    return std::nullopt;
  };
  if (auto g = take("check(", Flavor::Check)) return g;
  return take("hat(", Flavor::Hat);
}

long generator_grading(const Orbit& o, Flavor f) {
  long base = o.grading ? *o.grading : o.parity;
  return f == Flavor::Check ? base : base + 1;
}

namespace {

bool ordered_or_throw(const CirclePoint& p, const CirclePoint& a, const CirclePoint& b,
                      const std::string& orbit) {
  try {
    return cyclically_ordered(p, a, b);
  } catch (const NonDistinct& e) {
    throw NonGenericConfiguration("cascade junction on " + orbit + ": " + e.what());
  }
}

struct Walker {
  const MorseBottSystem& sys;
  const std::string& beta;
  bool hat_end; // bottom piece must be constrained at p_beta
  const std::function<void(const std::vector<CascadePiece>&)>& record;

  // Positioned on orbit `at`; the chain's last piece (if any) arrived there.
  void extend(const std::string& at, std::vector<CascadePiece>& chain) {
    std::optional<CirclePoint> arrived;
    if (!chain.empty()) arrived = chain.back().e_minus;
    auto junction_ok = [&](const CirclePoint& next_plus) {
      if (!arrived) return true;
      return ordered_or_throw(sys.basepoint(at), *arrived, next_plus, at);
    };
    const Rat& floor_action = sys.orbit(beta).action;

    if (hat_end) {
      auto it = sys.m1.find({at, beta});
      if (it != sys.m1.end()) {
        Frame f = frame_for(sys, it->first);
        for (std::size_t i = 0; i < it->second.size(); ++i)
          for (const auto& pre : signed_preimages(it->second[i], Side::Minus, sys.basepoint(beta), f)) {
            if (!junction_ok(pre.residual)) continue;
            CascadePiece p{CascadePiece::Kind::BottomPoint, at, beta, i, pre.t, pre.residual,
                           sys.basepoint(beta), Int(-pre.sign)};
            chain.push_back(p);
            record(chain);
            chain.pop_back();
          }
      }
    }
    for (const auto& [pair, pts] : sys.m0) {
      if (pair.first != at) continue;
      const std::string& next = pair.second;
      bool arrives = next == beta;
      if (arrives && hat_end) continue;
      if (!arrives && !(sys.orbit(next).action > floor_action)) continue;
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (!junction_ok(pts[i].e_plus)) continue;
        chain.push_back({CascadePiece::Kind::Point, at, next, i, std::nullopt, pts[i].e_plus,
                         pts[i].e_minus, Int(pts[i].sign)});
        if (arrives)
          record(chain);
        else
          extend(next, chain);
        chain.pop_back();
      }
    }
  }
};

} // namespace

void extend_cascades(const MorseBottSystem& sys, const std::string& at, const std::string& beta,
                     bool hat_end, std::vector<CascadePiece>& chain,
                     const std::function<void(const std::vector<CascadePiece>&)>& emit) {
  Walker w{sys, beta, hat_end, emit};
  w.extend(at, chain);
}

std::vector<Cascade> enumerate_cascades(const MorseBottSystem& sys, const Generator& src,
                                        const Generator& dst) {
  std::vector<Cascade> out;
  const std::string& alpha = src.orbit;
  const std::string& beta = dst.orbit;
  if (alpha == beta) {
    if (src.flavor == Flavor::Hat && dst.flavor == Flavor::Check && !sys.orbit(alpha).good)
      for (int k = 0; k < 2; ++k) {
        Cascade c;
        c.pieces.push_back({CascadePiece::Kind::Synthetic, alpha, alpha, static_cast<std::size_t>(k),
                            std::nullopt, 0, 0, Int(-1)});
        c.sign = -1;
        out.push_back(std::move(c));
      }
    return out;
  }
  if (!(sys.orbit(alpha).action > sys.orbit(beta).action)) return out;

  std::function<void(const std::vector<CascadePiece>&)> record =
      [&](const std::vector<CascadePiece>& pieces) {
        Cascade c;
        for (const auto& p : pieces) {
          c.sign *= p.weight;
          if (p.minus != beta) c.intermediates.push_back(p.minus);
        }
        c.pieces = pieces;
        out.push_back(std::move(c));
      };
  Walker w{sys, beta, dst.flavor == Flavor::Hat, record};
  std::vector<CascadePiece> chain;
  if (src.flavor == Flavor::Hat) {
    w.extend(alpha, chain);
    return out;
  }
  if (dst.flavor == Flavor::Hat) {
    auto it = sys.m2cc.find({alpha, beta});
    if (it != sys.m2cc.end() && it->second != 0) {
      Cascade c;
      c.pieces.push_back({CascadePiece::Kind::DoubleCount, alpha, beta, 0, std::nullopt,
                          sys.basepoint(alpha), sys.basepoint(beta), it->second});
      c.sign = it->second;
      out.push_back(std::move(c));
    }
  }
  // check at the top: start on an m1 component through p_alpha
  for (const auto& [pair, comps] : sys.m1) {
    if (pair.first != alpha) continue;
    const std::string& next = pair.second;
    bool arrives = next == beta;
    if (arrives && dst.flavor == Flavor::Hat) continue;
    if (!arrives && !(sys.orbit(next).action > sys.orbit(beta).action)) continue;
    Frame f = frame_for(sys, pair);
    for (std::size_t i = 0; i < comps.size(); ++i)
      for (const auto& pre : signed_preimages(comps[i], Side::Plus, sys.basepoint(alpha), f)) {
        chain.push_back({CascadePiece::Kind::TopPoint, alpha, next, i, pre.t, sys.basepoint(alpha),
                         pre.residual, Int(pre.sign)});
        if (arrives)
          w.record(chain);
        else
          w.extend(next, chain);
        chain.pop_back();
      }
  }
  return out;
}

std::vector<Generator> ncc_generators(const MorseBottSystem& sys) {
  std::vector<const Orbit*> orbs;
  for (const auto& [id, o] : sys.orbits) orbs.push_back(&o);
  std::stable_sort(orbs.begin(), orbs.end(),
                   [](const Orbit* a, const Orbit* b) { return a->action > b->action; });
  std::vector<Generator> gens;
  for (const Orbit* o : orbs) {
    gens.push_back({o->id, Flavor::Check});
    gens.push_back({o->id, Flavor::Hat});
  }
  return gens;
}

ChainComplex build_ncc(const MorseBottSystem& sys) {
  ChainComplex c;
  c.mode = sys.mode;
  auto gens = ncc_generators(sys);
  for (const auto& g : gens) {
    const Orbit& o = sys.orbit(g.orbit);
    c.generators.push_back({g.id(), generator_grading(o, g.flavor), o.homotopy_class, o.action, o.id});
  }
  const std::size_t n = gens.size();
  c.differential = IntMatrix(n, n);
  std::vector<std::vector<Int>> column(n, std::vector<Int>(n));
  parallel_for(n, [&](std::size_t j) {
    for (std::size_t i = 0; i < n; ++i) {
      // only degree-lowering pairs can carry dimension-0 cascades
      if (sys.mode.normalize(c.generators[j].grading - 1) != sys.mode.normalize(c.generators[i].grading))
        continue;
      if (c.generators[j].homotopy_class != c.generators[i].homotopy_class) continue;
      Int total = 0;
      for (const auto& cas : enumerate_cascades(sys, gens[j], gens[i])) total += cas.sign;
      column[j][i] = total;
    }
  });
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i)
      if (column[j][i] != 0) c.differential.set(i, j, column[j][i]);
  return c;
}

namespace {

template <class Keep>
MorseBottSystem restrict_orbits(const MorseBottSystem& sys, Keep&& keep) {
  MorseBottSystem out;
  out.mode = sys.mode;
  for (const auto& [id, o] : sys.orbits)
    if (keep(o)) {
      out.orbits[id] = o;
      if (auto it = sys.basepoints.find(id); it != sys.basepoints.end()) out.basepoints[id] = it->second;
    }
  auto both = [&](const OrbitPair& p) { return out.orbits.count(p.first) && out.orbits.count(p.second); };
  for (const auto& [p, v] : sys.m0)
    if (both(p)) out.m0[p] = v;
  for (const auto& [p, v] : sys.m1)
    if (both(p)) out.m1[p] = v;
  for (const auto& [p, v] : sys.m2cc)
    if (both(p)) out.m2cc[p] = v;
  return out;
}

} // namespace

MorseBottSystem restrict_action(const MorseBottSystem& sys, const Rat& bound) {
  return restrict_orbits(sys, [&](const Orbit& o) { return o.action < bound; });
}

MorseBottSystem restrict_class(const MorseBottSystem& sys, const std::string& cls) {
  return restrict_orbits(sys, [&](const Orbit& o) { return o.homotopy_class == cls; });
}

HomologyResult nch_homology(const MorseBottSystem& sys, const std::optional<Rat>& action_bound) {
  if (action_bound) return homology(build_ncc(restrict_action(sys, *action_bound)));
  return homology(build_ncc(sys));
}

} // namespace cascadeho
