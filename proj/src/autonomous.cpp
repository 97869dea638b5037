#include "cascadeho/autonomous.hpp"

#include "cascadeho/cascade.hpp"
#include "cascadeho/errors.hpp"

#include <algorithm>
#include <numeric>
#include <limits>
#include <set>

namespace cascadeho {

namespace {

std::vector<const Orbit*> ordered(const AutonomousData& data) {
  std::vector<const Orbit*> out;
  for (const auto& [id, o] : data.orbits) out.push_back(&o);
  std::stable_sort(out.begin(), out.end(), [](const Orbit* a, const Orbit* b) { return a->action > b->action; });
  return out;
}

long base_grading(const Orbit& o) { return o.grading ? *o.grading : o.parity; }

long gcd_l(long a, long b) { return std::gcd(a, b); }

// Generators of NCC (check, hat per orbit) in the shared order.
std::vector<Generator> generators_of(const AutonomousData& data) {
  std::vector<Generator> g;
  for (const Orbit* o : ordered(data)) {
    g.push_back({o->id, Flavor::Check});
    g.push_back({o->id, Flavor::Hat});
  }
  return g;
}

// Which unknown block an extra entry addresses, if the slot is allowed.
bool allowed_slot(const AutonomousData& data, const Generator& s, const Generator& t) {
  if (s.orbit == t.orbit) return false;
  const Orbit& a = data.orbits.at(s.orbit);
  const Orbit& b = data.orbits.at(t.orbit);
  if (s.flavor == Flavor::Check && t.flavor == Flavor::Hat) return true;
  if (s.flavor == Flavor::Hat && t.flavor == Flavor::Hat) return !a.good;
  if (s.flavor == Flavor::Check && t.flavor == Flavor::Check) return !b.good;
  return false;
}

Rat weight_sum(const AutonomousData& data, const OrbitPair& p) {
  Rat s = 0;
  auto it = data.mj1.find(p);
  if (it != data.mj1.end())
    for (const auto& r : it->second) {
      if (r.du < 1) throw InvalidComplex("cylinder multiplicity must be positive");
      Rat w(r.epsilon, r.du);
      w.canonicalize();
      s += w;
    }
  return s;
}

} // namespace

const char* status_name(CheckResult::Status s) {
  switch (s) {
  case CheckResult::Status::Pass: return "pass";
  case CheckResult::Status::Fail: return "fail";
  case CheckResult::Status::Skip: return "skip";
  }
  return "?";
}

bool CheckList::ok() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const CheckResult& c) { return c.status == CheckResult::Status::Fail; });
}

void CheckList::add(std::string name, bool pass, std::string detail) {
  checks.push_back({std::move(name), pass ? CheckResult::Status::Pass : CheckResult::Status::Fail,
                    std::move(detail)});
}

void CheckList::skip(std::string name, std::string detail) {
  checks.push_back({std::move(name), CheckResult::Status::Skip, std::move(detail)});
}

ValidationReport validate_autonomous(const AutonomousData& data) {
  ValidationReport r = validate_orbits(data.orbits, data.mode);
  auto gap_ok = [&](long gap, long want) {
    return data.mode.kind == GradingMode::Kind::Parity ? (((gap - want) % 2) + 2) % 2 == 0
                                                       : data.mode.normalize(gap) == data.mode.normalize(want);
  };
  for (const auto& [pair, recs] : data.mj1) {
    std::string loc = "mj1[" + pair_name(pair) + "]";
    auto a = data.orbits.find(pair.first), b = data.orbits.find(pair.second);
    if (a == data.orbits.end() || b == data.orbits.end()) {
      r.add("system.unknown_orbit", loc, "record references an unknown orbit");
      continue;
    }
    if (pair.first == pair.second) {
      r.add("system.self_pair", loc, "cylinders join distinct orbits");
      continue;
    }
    if (recs.empty()) continue;
    const Orbit& A = a->second;
    const Orbit& B = b->second;
    if (!(A.action > B.action)) r.add("action.nondecreasing", loc, "action must strictly decrease");
    if (A.homotopy_class != B.homotopy_class) r.add("class.mismatch", loc, "cylinders preserve the homotopy class");
    if (!gap_ok(base_grading(A) - base_grading(B), 1))
      r.add("grading.mismatch", loc, "index-one cylinders need a grading gap of 1");
    for (std::size_t i = 0; i < recs.size(); ++i) {
      std::string rl = loc + "[" + std::to_string(i) + "]";
      if (recs[i].epsilon != 1 && recs[i].epsilon != -1) r.add("record.epsilon", rl, "epsilon must be +1 or -1");
      if (recs[i].du < 1 || gcd_l(A.d, B.d) % recs[i].du != 0)
        r.add("record.du_divisibility", rl,
              "du = " + std::to_string(recs[i].du) + " must divide gcd(d+, d-) = " + std::to_string(gcd_l(A.d, B.d)));
    }
  }
  for (const auto& [key, value] : data.extra) {
    std::string loc = "extra[" + key.first + "->" + key.second + "]";
    auto s = parse_generator(key.first), t = parse_generator(key.second);
    if (!s || !t || !data.orbits.count(s->orbit) || !data.orbits.count(t->orbit)) {
      r.add("extra.unknown_generator", loc, "entry names an unknown generator");
      continue;
    }
    if (value == 0) continue;
    if (!allowed_slot(data, *s, *t)) {
      r.add("extra.slot", loc, "only check->hat, hat->hat from a bad orbit, and check->check into a bad orbit are free inputs");
      continue;
    }
    const Orbit& A = data.orbits.at(s->orbit);
    const Orbit& B = data.orbits.at(t->orbit);
    if (!gap_ok(generator_grading(A, s->flavor) - generator_grading(B, t->flavor), 1))
      r.add("extra.grading", loc, "entry must lower the grading by 1");
    if (!(A.action > B.action)) r.add("action.nondecreasing", loc, "action must strictly decrease");
    if (A.homotopy_class != B.homotopy_class) r.add("class.mismatch", loc, "entries preserve the homotopy class");
  }
  return r;
}

std::vector<std::string> good_orbits(const AutonomousData& data) {
  std::vector<std::string> out;
  for (const Orbit* o : ordered(data))
    if (o->good) out.push_back(o->id);
  return out;
}

RatMatrix delta(const AutonomousData& data) {
  auto good = good_orbits(data);
  RatMatrix m(good.size(), good.size());
  for (std::size_t j = 0; j < good.size(); ++j)
    for (std::size_t i = 0; i < good.size(); ++i)
      if (i != j) m.at(i, j) = weight_sum(data, {good[j], good[i]});
  return m;
}

RatMatrix kappa(const AutonomousData& data) {
  auto good = good_orbits(data);
  RatMatrix m(good.size(), good.size());
  for (std::size_t i = 0; i < good.size(); ++i) m.at(i, i) = Rat(data.orbits.at(good[i]).d);
  return m;
}

RatMatrix egh_differential(const AutonomousData& data) { return delta(data) * kappa(data); }

namespace {

ChainComplex egh_complex(const AutonomousData& data) {
  auto good = good_orbits(data);
  RatMatrix d = egh_differential(data);
  if (!(d * d).is_zero()) {
    RatMatrix sq = d * d;
    for (std::size_t j = 0; j < sq.cols(); ++j)
      for (std::size_t i = 0; i < sq.rows(); ++i)
        if (sq.at(i, j) != 0) throw SquareNonzero(good[j], good[i], to_string(sq.at(i, j)));
  }
  ChainComplex c;
  c.mode = data.mode;
  Int den = 1;
  for (std::size_t j = 0; j < d.cols(); ++j)
    for (std::size_t i = 0; i < d.rows(); ++i) {
      Int q = d.at(i, j).get_den();
      den = den / gcd(den, q) * q;
    }
  for (const auto& id : good) {
    const Orbit& o = data.orbits.at(id);
    c.generators.push_back({id, base_grading(o), o.homotopy_class, o.action, id});
  }
  c.differential = IntMatrix(good.size(), good.size());
  for (std::size_t j = 0; j < d.cols(); ++j)
    for (std::size_t i = 0; i < d.rows(); ++i)
      if (d.at(i, j) != 0) {
        Rat v = d.at(i, j) * Rat(den);
        c.differential.set(i, j, v.get_num());
      }
  return c;
}

} // namespace

std::map<HomologyKey, std::size_t> egh_homology(const AutonomousData& data) {
  (void)block_differential(data); // admissibility surrogate: the full NCC must square to zero
  return rational_homology(egh_complex(data));
}

ChainComplex block_differential(const AutonomousData& data) {
  auto gens = generators_of(data);
  ChainComplex c;
  c.mode = data.mode;
  for (const auto& g : gens) {
    const Orbit& o = data.orbits.at(g.orbit);
    c.generators.push_back({g.id(), generator_grading(o, g.flavor), o.homotopy_class, o.action, o.id});
  }
  const std::size_t n = gens.size();
  IntMatrix& D = c.differential;
  D = IntMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      const Generator& s = gens[j];
      const Generator& t = gens[i];
      const Orbit& a = data.orbits.at(s.orbit);
      const Orbit& b = data.orbits.at(t.orbit);
      if (s.orbit == t.orbit) {
        if (s.flavor == Flavor::Hat && t.flavor == Flavor::Check && !a.good) D.set(i, j, -2);
        continue;
      }
      Int v = 0;
      if (allowed_slot(data, s, t)) {
        auto it = data.extra.find({s.id(), t.id()});
        if (it != data.extra.end()) v = it->second;
      } else if (s.flavor == Flavor::Check && t.flavor == Flavor::Check && a.good && b.good) {
        Rat w = weight_sum(data, {s.orbit, t.orbit}) * Rat(a.d);
        if (w.get_den() != 1) throw InvalidComplex("check block entry is not integral: " + to_string(w));
        v = w.get_num();
      } else if (s.flavor == Flavor::Hat && t.flavor == Flavor::Hat && a.good && b.good) {
        Rat w = -weight_sum(data, {s.orbit, t.orbit}) * Rat(b.d);
        if (w.get_den() != 1) throw InvalidComplex("hat block entry is not integral: " + to_string(w));
        v = w.get_num();
      }
      if (v != 0) D.set(i, j, v);
    }
  auto sq = verify_square_zero(c);
  if (!sq.ok) throw SquareNonzero(sq.witness->first, sq.witness->second, to_string(sq.value));
  return c;
}

IntMatrix bv_operator(const AutonomousData& data) {
  auto gens = generators_of(data);
  IntMatrix m(gens.size(), gens.size());
  for (std::size_t j = 0; j + 1 < gens.size(); j += 2) {
    const Orbit& o = data.orbits.at(gens[j].orbit);
    if (o.good) m.set(j + 1, j, Int(o.d)); // check(o) sits at j, hat(o) at j + 1
  }
  return m;
}

ChainComplex equivariant_differential(const AutonomousData& data, long K) {
  if (K < 0) throw std::invalid_argument("truncation K must be nonnegative");
  ChainComplex base = block_differential(data);
  IntMatrix bv = bv_operator(data);
  const std::size_t n = base.size();
  ChainComplex c;
  c.mode = data.mode;
  for (long k = 0; k <= K; ++k)
    for (const auto& g : base.generators) {
      ChainGenerator x = g;
      x.id = g.id + "U^" + std::to_string(k);
      x.grading = g.grading + 2 * k;
      c.generators.push_back(x);
    }
  const std::size_t N = c.size();
  c.differential = IntMatrix(N, N);
  for (long k = 0; k <= K; ++k) {
    for (const auto& [key, v] : base.differential.entries())
      c.differential.set(k * n + key.first, k * n + key.second, v);
    if (k > 0)
      for (const auto& [key, v] : bv.entries())
        c.differential.set((k - 1) * n + key.first, k * n + key.second, v);
  }
  auto sq = verify_square_zero(c);
  if (!sq.ok) throw SquareNonzero(sq.witness->first, sq.witness->second, to_string(sq.value));
  return c;
}

std::optional<long> stable_range(const AutonomousData& data, long K) {
  if (data.mode.kind != GradingMode::Kind::Integer) return std::nullopt;
  long top = 2 * K - 2;
  bool any = false;
  long gmin = 0;
  for (const auto& [id, o] : data.orbits) {
    long g = base_grading(o);
    gmin = any ? std::min(gmin, g) : g;
    any = true;
  }
  // C_K holds every generator of degrees n and n + 1 once n <= gmin + 2K
  if (any) top = std::min(top, gmin + 2 * K);
  return top;
}

EquivariantResult equivariant_homology(const AutonomousData& data, long K) {
  EquivariantResult out;
  out.homology = homology(equivariant_differential(data, K));
  auto range = stable_range(data, K);
  out.homology.stable_range = range;
  for (auto& [key, g] : out.homology.groups) g.stable = range && key.second <= *range;
  if (range && K >= 1) {
    HomologyResult prev = homology(equivariant_differential(data, K - 1));
    long lower = *stable_range(data, K - 1);
    std::set<HomologyKey> keys;
    for (const auto& [k, g] : out.homology.groups) keys.insert(k);
    for (const auto& [k, g] : prev.groups) keys.insert(k);
    for (const auto& k : keys) {
      if (k.second > lower) continue;
      auto a = out.homology.at(k.first, k.second), b = prev.at(k.first, k.second);
      if (!a.same_group(b)) {
        out.truncation_consistent = false;
        out.truncation_witness = "degree " + std::to_string(k.second) + " class " + k.first + ": " +
                                 a.describe() + " at K = " + std::to_string(K) + " vs " + b.describe() +
                                 " at K = " + std::to_string(K - 1);
        break;
      }
    }
  }
  return out;
}

namespace {

// Orbit-indexed blocks of the NCC differential (rows target, columns source).
struct Blocks {
  std::vector<std::string> orbits;
  IntMatrix check, plus, minus, hat, kappa;
};

Blocks blocks_of(const AutonomousData& data) {
  ChainComplex c = block_differential(data);
  Blocks b;
  for (const Orbit* o : ordered(data)) b.orbits.push_back(o->id);
  const std::size_t n = b.orbits.size();
  b.check = b.plus = b.minus = b.hat = b.kappa = IntMatrix(n, n);
  for (const auto& [k, v] : c.differential.entries()) {
    std::size_t ti = k.first / 2, sj = k.second / 2;
    bool t_hat = k.first % 2, s_hat = k.second % 2;
    IntMatrix& m = !s_hat ? (!t_hat ? b.check : b.minus) : (t_hat ? b.hat : b.plus);
    m.set(ti, sj, v);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const Orbit& o = data.orbits.at(b.orbits[i]);
    if (o.good) b.kappa.set(i, i, Int(o.d));
  }
  return b;
}

std::string first_entry(const IntMatrix& m, const std::vector<std::string>& names) {
  if (m.is_zero()) return {};
  auto [k, v] = *m.entries().begin();
  return "(" + names[k.second] + " -> " + names[k.first] + ") = " + to_string(v);
}

std::string first_entry(const RatMatrix& m, const std::vector<std::string>& names) {
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i)
      if (m.at(i, j) != 0) return "(" + names[j] + " -> " + names[i] + ") = " + to_string(m.at(i, j));
  return {};
}

} // namespace

CheckList autonomous_identities(const AutonomousData& data, long K) {
  CheckList out;
  ChainComplex ncc;
  try {
    ncc = block_differential(data);
    out.add("ncc.square_zero", true);
  } catch (const SquareNonzero& e) {
    out.add("ncc.square_zero", false, e.what());
    return out;
  }
  Blocks b = blocks_of(data);
  auto good = good_orbits(data);
  RatMatrix dk = egh_differential(data);
  RatMatrix kd = kappa(data) * delta(data);
  out.add("delta_kappa.square_zero", (dk * dk).is_zero(), first_entry(dk * dk, good));
  out.add("kappa_delta.square_zero", (kd * kd).is_zero(), first_entry(kd * kd, good));
  IntMatrix anti = b.kappa * b.check + b.hat * b.kappa;
  out.add("kappa_check_plus_hat_kappa", anti.is_zero(), first_entry(anti, b.orbits));
  out.add("plus_kappa", (b.plus * b.kappa).is_zero(), first_entry(b.plus * b.kappa, b.orbits));
  out.add("kappa_plus", (b.kappa * b.plus).is_zero(), first_entry(b.kappa * b.plus, b.orbits));

  // good-to-good parts of the check and hat blocks against delta and kappa
  std::vector<std::size_t> gi;
  for (std::size_t i = 0; i < b.orbits.size(); ++i)
    if (data.orbits.at(b.orbits[i]).good) gi.push_back(i);
  RatMatrix check_g = RatMatrix::from(b.check.select(gi, gi));
  RatMatrix hat_g = RatMatrix::from(b.hat.select(gi, gi));
  out.add("check_equals_delta_kappa", check_g == dk, first_entry(check_g - dk, good));
  RatMatrix neg_kd = RatMatrix(kd.rows(), kd.cols()) - kd;
  out.add("hat_equals_minus_kappa_delta", hat_g == neg_kd, first_entry(hat_g - neg_kd, good));
  try {
    (void)equivariant_differential(data, K);
    out.add("equivariant.square_zero", true, "K = " + std::to_string(K));
  } catch (const SquareNonzero& e) {
    out.add("equivariant.square_zero", false, e.what());
  }
  return out;
}

CheckList compare_egh(const AutonomousData& data, long K, const AutonomousData* reference) {
  CheckList out;
  ChainComplex full = equivariant_differential(data, K);
  auto range = stable_range(data, K);
  const std::size_t n = full.size();

  // (i) C' omits check(b)U^0 for good b
  std::vector<bool> in_sub(n, true);
  std::vector<std::size_t> quotient; // generators check(b)U^0, b good, in order
  for (std::size_t i = 0; i < n; ++i) {
    const auto& g = full.generators[i];
    auto base = g.id.substr(0, g.id.rfind("U^"));
    auto gen = parse_generator(base);
    if (g.id.compare(g.id.size() - 3, 3, "U^0") == 0 && gen && gen->flavor == Flavor::Check &&
        data.orbits.at(gen->orbit).good) {
      in_sub[i] = false;
      quotient.push_back(i);
    }
  }
  std::string witness;
  for (const auto& [k, v] : full.differential.entries())
    if (in_sub[k.second] && !in_sub[k.first]) {
      witness = full.generators[k.second].id + " -> " + full.generators[k.first].id + " = " + to_string(v);
      break;
    }
  out.add("subcomplex", witness.empty(), witness);

  // (ii) C' is rationally acyclic in the stable range
  std::vector<std::size_t> sub;
  for (std::size_t i = 0; i < n; ++i)
    if (in_sub[i]) sub.push_back(i);
  if (!witness.empty()) {
    out.skip("subcomplex_acyclic", "C' is not a subcomplex");
  } else if (!range) {
    out.skip("subcomplex_acyclic", "gradings are not integral, no stable range");
  } else {
    ChainComplex cp;
    cp.mode = full.mode;
    for (auto i : sub) cp.generators.push_back(full.generators[i]);
    cp.differential = full.differential.select(sub, sub);
    std::string bad;
    for (const auto& [key, rank] : rational_homology(cp))
      if (key.second <= *range && rank != 0) {
        bad = "rank " + std::to_string(rank) + " in degree " + std::to_string(key.second) + " class " + key.first;
        break;
      }
    out.add("subcomplex_acyclic", bad.empty(), bad.empty() ? "through degree " + std::to_string(*range) : bad);
  }

  // (iii) quotient differential equals the cylindrical differential
  auto good = good_orbits(data);
  RatMatrix egh = egh_differential(data);
  std::string diff;
  for (std::size_t j = 0; j < quotient.size() && diff.empty(); ++j)
    for (std::size_t i = 0; i < quotient.size(); ++i) {
      Rat q(full.differential.get(quotient[i], quotient[j]));
      if (q != egh.at(i, j)) {
        diff = "(" + good[j] + " -> " + good[i] + "): quotient " + to_string(q) + " vs " + to_string(egh.at(i, j));
        break;
      }
    }
  out.add("quotient_equals_egh", diff.empty(), diff);

  // (iv) rational ranks agree in the stable range
  auto eq = equivariant_homology(data, K);
  auto egh_ranks = egh_homology(data);
  if (!range) {
    out.skip("ranks_agree", "gradings are not integral, no stable range");
  } else {
    std::set<HomologyKey> keys;
    auto chs1_ranks = rationalize(eq.homology);
    for (const auto& [k, r] : chs1_ranks) keys.insert(k);
    for (const auto& [k, r] : egh_ranks) keys.insert(k);
    std::string bad;
    for (const auto& k : keys) {
      if (k.second > *range) continue;
      std::size_t a = chs1_ranks.count(k) ? chs1_ranks.at(k) : 0;
      std::size_t b = egh_ranks.count(k) ? egh_ranks.at(k) : 0;
      if (a != b) {
        bad = "degree " + std::to_string(k.second) + " class " + k.first + ": " + std::to_string(a) + " vs " +
              std::to_string(b);
        break;
      }
    }
    out.add("ranks_agree", bad.empty(), bad);
  }

  if (reference) {
    auto ref_eq = equivariant_homology(*reference, K);
    auto ref_range = stable_range(*reference, K);
    long common = std::numeric_limits<long>::max();
    if (range && ref_range) common = std::min(*range, *ref_range);
    auto compare_groups = [&](const HomologyResult& x, const HomologyResult& y, long limit) {
      std::set<HomologyKey> keys;
      for (const auto& [k, g] : x.groups) keys.insert(k);
      for (const auto& [k, g] : y.groups) keys.insert(k);
      for (const auto& k : keys) {
        if (k.second > limit) continue;
        auto a = x.at(k.first, k.second), b = y.at(k.first, k.second);
        if (!a.same_group(b))
          return "degree " + std::to_string(k.second) + " class " + k.first + ": " + a.describe() + " vs " +
                 b.describe() + " (reference)";
      }
      return std::string();
    };
    std::string d1 = compare_groups(eq.homology, ref_eq.homology, common);
    out.add("reference.chs1", d1.empty(), d1);
    std::string d2 = compare_groups(homology(block_differential(data)), homology(block_differential(*reference)),
                                    std::numeric_limits<long>::max());
    out.add("reference.nch", d2.empty(), d2);
    auto ref_egh = egh_homology(*reference);
    std::string d3;
    std::set<HomologyKey> keys;
    for (const auto& [k, r] : egh_ranks) keys.insert(k);
    for (const auto& [k, r] : ref_egh) keys.insert(k);
    for (const auto& k : keys) {
      std::size_t a = egh_ranks.count(k) ? egh_ranks.at(k) : 0;
      std::size_t b = ref_egh.count(k) ? ref_egh.at(k) : 0;
      if (a != b) {
        d3 = "degree " + std::to_string(k.second) + " class " + k.first + ": rank " + std::to_string(a) + " vs " +
             std::to_string(b) + " (reference)";
        break;
      }
    }
    out.add("reference.egh", d3.empty(), d3);
  }
  return out;
}

AutonomousData restrict_autonomous(const AutonomousData& data, const std::optional<Rat>& action_bound,
                                   const std::optional<std::string>& cls) {
  AutonomousData out;
  out.mode = data.mode;
  for (const auto& [id, o] : data.orbits)
    if ((!action_bound || o.action < *action_bound) && (!cls || o.homotopy_class == *cls)) out.orbits[id] = o;
  for (const auto& [pair, recs] : data.mj1)
    if (out.orbits.count(pair.first) && out.orbits.count(pair.second)) out.mj1[pair] = recs;
  for (const auto& [key, v] : data.extra) {
    auto s = parse_generator(key.first), t = parse_generator(key.second);
    if (s && t && out.orbits.count(s->orbit) && out.orbits.count(t->orbit)) out.extra[key] = v;
  }
  return out;
}

// ---------------------------------------------------------------- realization

namespace {

PLMap line(const Rat& start, const Rat& slope) { return PLMap{{{Rat(0), start}, {Rat(1), start + slope}}}; }

} // namespace

MorseBottSystem realize_as_system(const AutonomousData& data) {
  MorseBottSystem sys;
  sys.mode = data.mode;
  sys.orbits = data.orbits;
  // Basepoints first; evaluation maps are then placed relative to them.
  std::size_t index = 0;
  for (const auto& [id, o] : data.orbits) sys.basepoints[id] = Rat(1, 2 * static_cast<long>(index++) + 3);
  long serial = 0;
  auto next_offset = [&](long prime) {
    ++serial;
    return Rat(serial, prime); // distinct small offsets, off every basepoint denominator
  };

  for (const auto& [pair, recs] : data.mj1) {
    const Orbit& a = data.orbits.at(pair.first);
    const Orbit& b = data.orbits.at(pair.second);
    if (!a.good || !b.good) continue; // these blocks carry no cylinder terms
    for (const auto& r : recs) {
      PLComponent c;
      c.kind = ComponentKind::Circle;
      c.e_plus = line(frac(sys.basepoints[pair.first] + next_offset(7919)), Rat(a.d / r.du));
      c.e_minus = line(frac(sys.basepoints[pair.second] + next_offset(7907)), Rat(b.d / r.du));
      c.sign_start = r.epsilon;
      sys.m1[pair].push_back(c);
    }
  }
  std::map<OrbitPair, Int> free_minus;
  for (const auto& [key, value] : data.extra) {
    if (value == 0) continue;
    auto s = parse_generator(key.first), t = parse_generator(key.second);
    if (!s || !t) throw Unsupported("unparseable extra entry");
    const Orbit& a = data.orbits.at(s->orbit);
    const Orbit& b = data.orbits.at(t->orbit);
    OrbitPair pair{s->orbit, t->orbit};
    long count = std::labs(value.get_si());
    int sg = value > 0 ? 1 : -1;
    if (s->flavor == Flavor::Check && t->flavor == Flavor::Hat) {
      free_minus[pair] = value;
    } else if (s->flavor == Flavor::Hat && t->flavor == Flavor::Hat && !a.good && b.good) {
      // e_- meets p_b once, before e_+ first passes p_a; two e_+ passes cancel at the top
      for (long k = 0; k < count; ++k) {
        Rat small = next_offset(104729);
        PLComponent c;
        c.kind = ComponentKind::Circle;
        c.e_plus = line(frac(sys.basepoints[pair.first] + small), Rat(2));
        c.e_minus = line(frac(sys.basepoints[pair.second] - small), Rat(1));
        c.sign_start = -sg;
        sys.m1[pair].push_back(c);
      }
    } else if (s->flavor == Flavor::Check && t->flavor == Flavor::Check && a.good && !b.good) {
      for (long k = 0; k < count; ++k) {
        Rat small = next_offset(104723);
        PLComponent c;
        c.kind = ComponentKind::Circle;
        c.e_plus = line(frac(sys.basepoints[pair.first] - small), Rat(1));
        c.e_minus = line(frac(sys.basepoints[pair.second] + small), Rat(2));
        c.sign_start = sg;
        sys.m1[pair].push_back(c);
      }
    } else {
      throw Unsupported("extra entry " + key.first + " -> " + key.second +
                        " has no circle model (both orbits bad)");
    }
  }
  // The remaining check -> hat block is whatever the supplied doubly
  // constrained counts must add to the pair cascades.
  ChainComplex partial = build_ncc(sys);
  for (const auto& [ida, a] : data.orbits)
    for (const auto& [idb, b] : data.orbits) {
      if (ida == idb) continue;
      auto src = partial.index_of(Generator{ida, Flavor::Check}.id());
      auto dst = partial.index_of(Generator{idb, Flavor::Hat}.id());
      Int have = partial.differential.get(*dst, *src);
      Int want = free_minus.count({ida, idb}) ? free_minus.at({ida, idb}) : Int(0);
      if (want != have) sys.m2cc[{ida, idb}] = want - have;
    }
  return sys;
}

} // namespace cascadeho
