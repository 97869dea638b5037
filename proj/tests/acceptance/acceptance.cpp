// Acceptance suite: one PASS/FAIL line per criterion. `--criterion N` runs one.
// The CLI path for the mutation criterion comes from CASCADEHO_CLI_PATH.

#include "cascadeho/autonomous.hpp"
#include "cascadeho/cascade.hpp"
#include "cascadeho/errors.hpp"
#include "cascadeho/io.hpp"
#include "cascadeho/morphism.hpp"
#include "cascadeho/scenarios.hpp"
#include "oracles.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <sys/wait.h>

using namespace cascadeho;

namespace {

// Pinned limits.
constexpr double kFastSeconds = 1.0;   // criteria 1 and 2
constexpr double kOracleSeconds = 30.0; // criterion 7
constexpr int kSnfTrials = 500;
constexpr std::size_t kSnfMaxDim = 6;
constexpr long kSnfEntryBound = 5;
constexpr std::uint64_t kSnfSeed = 20240601;
constexpr int kBasepointSeeds = 5;

struct Outcome {
  bool pass = true;
  std::string detail;
  void fail(const std::string& why) {
    if (pass) detail = why;
    else detail += "; " + why;
    pass = false;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string cls(long d) { return std::to_string(d) + "Γ"; }

// Every nonzero group of `h` in class `c` must be listed, and every listed one must match.
void expect_groups(Outcome& out, const std::string& what, const HomologyResult& h, const std::string& c,
                   const std::map<long, std::string>& want, std::optional<long> upto = std::nullopt) {
  for (const auto& [g, s] : want) {
    auto got = h.at(c, g);
    if (got.describe() != s) out.fail(what + " degree " + std::to_string(g) + ": " + got.describe() + " vs " + s);
    if (!got.stable) out.fail(what + " degree " + std::to_string(g) + " outside the stable range");
  }
  for (const auto& [k, grp] : h.groups) {
    if (k.first != c || grp.is_zero() || want.count(k.second)) continue;
    if (upto && k.second > *upto) continue;
    out.fail(what + " unexpected " + grp.describe() + " at degree " + std::to_string(k.second));
  }
}

Outcome criterion1() {
  Outcome out;
  auto t0 = std::chrono::steady_clock::now();
  struct Case {
    long g, e, d;
    std::map<long, std::string> want;
  };
  std::vector<Case> cases = {
      {1, 1, 2, {{2, "Z"}, {1, "Z^2"}, {0, "Z^2 + Z/2"}, {-1, "Z"}}},
      {2, 1, 3, {{2, "Z"}, {1, "Z^4"}, {0, "Z^4 + Z/3"}, {-1, "Z"}}},
  };
  for (const auto& c : cases) {
    std::string tag = "(" + std::to_string(c.g) + "," + std::to_string(c.e) + "," + std::to_string(c.d) + ")";
    auto data = prequantization(c.g, c.e, c.d);
    expect_groups(out, tag, homology(block_differential(data)), cls(c.d), c.want);
    expect_groups(out, tag + " realized", nch_homology(realize_as_system(data)), cls(c.d), c.want);
  }
  double s = seconds_since(t0);
  if (s >= kFastSeconds) out.fail("took " + std::to_string(s) + " s");
  if (out.pass) out.detail = "prequantization NCH exact for (1,1,2) and (2,1,3), block and realized";
  return out;
}

Outcome criterion2() {
  Outcome out;
  auto t0 = std::chrono::steady_clock::now();
  auto r = equivariant_homology(prequantization(1, 1, 2), 3);
  if (!r.truncation_consistent) out.fail("truncation inconsistent: " + r.truncation_witness);
  std::map<long, std::string> want = {
      {-1, "Z"}, {0, "Z^2 + Z/2"}, {1, "Z + (Z/2)^2"}, {2, "(Z/2)^2"}, {3, "(Z/2)^2"}};
  // Degree 4 is also certified for K = 3; the listed degrees are the ones compared.
  expect_groups(out, "CH^S1", r.homology, cls(2), want, 3);
  double s = seconds_since(t0);
  if (s >= kFastSeconds) out.fail("took " + std::to_string(s) + " s");
  if (out.pass) out.detail = "CH^S1 of (1,1,2), K = 3, exact in degrees -1..3";
  return out;
}

Outcome criterion3() {
  Outcome out;
  for (long g = 1; g <= 2; ++g)
    for (long e = 1; e <= 2; ++e)
      for (long d = 1; d <= 3; ++d) {
        std::string tag = "(" + std::to_string(g) + "," + std::to_string(e) + "," + std::to_string(d) + ")";
        auto data = prequantization(g, e, d);
        auto ranks = egh_homology(data);
        std::map<long, std::size_t> want = {{-1, 1}, {0, static_cast<std::size_t>(2 * g)}, {1, 1}};
        for (const auto& [k, v] : ranks) {
          std::size_t w = k.first == cls(d) && want.count(k.second) ? want[k.second] : 0;
          if (v != w) out.fail(tag + " EGH rank " + std::to_string(v) + " at degree " + std::to_string(k.second));
        }
        for (const auto& [deg, w] : want)
          if (ranks[{cls(d), deg}] != w) out.fail(tag + " EGH rank missing at degree " + std::to_string(deg));
        auto checks = compare_egh(data, 3);
        for (const auto& c : checks.checks)
          if (c.status != CheckResult::Status::Pass) out.fail(tag + " " + c.name + " " + c.detail);
        if (checks.checks.size() != 4) out.fail(tag + " expected four comparison steps");
      }
  if (out.pass) out.detail = "EGH ranks 1, 2g, 1 and all four comparison steps on 12 parameter sets";
  return out;
}

const std::map<long, std::string> kPdChs1 = {{1, "Z"}, {2, "Z/2"}, {4, "Z/2"}, {6, "Z/2"}, {8, "Z/2"}};

Outcome criterion4() {
  Outcome out;
  auto minus = equivariant_homology(period_doubling(PDSide::Minus), 5);
  long top = minus.homology.stable_range.value_or(0);
  expect_groups(out, "lambda-", minus.homology, cls(2), kPdChs1, top);
  for (long c : {-5, -3, -1, 1, 3, 5}) {
    auto data = period_doubling(PDSide::Plus, c);
    std::string tag = "c=" + std::to_string(c);
    expect_groups(out, tag + " NCH", homology(block_differential(data)), cls(2), {{1, "Z"}, {2, "Z"}});
    auto plus = equivariant_homology(data, 5);
    expect_groups(out, tag + " CH^S1", plus.homology, cls(2), kPdChs1, top);
    for (long g = 0; g <= top; ++g)
      if (!plus.homology.at(cls(2), g).same_group(minus.homology.at(cls(2), g)))
        out.fail(tag + " lambda+ and lambda- differ at degree " + std::to_string(g));
  }
  if (out.pass) out.detail = "NCH(lambda+) = Z at 1, 2 for odd c; CH^S1 agrees with lambda- through degree " +
                             std::to_string(top);
  return out;
}

Outcome criterion5() {
  Outcome out;
  auto even = period_doubling(PDSide::Plus, 2, true);
  auto minus = period_doubling(PDSide::Minus);
  auto r = equivariant_homology(even, 5);
  auto deg2 = r.homology.at(cls(2), 2);
  bool differs = deg2.describe() != kPdChs1.at(2);
  if (!differs)
    out.fail("CH^S1 at degree 2 is " + deg2.describe() + ", equal to the odd-c value");
  auto checks = compare_egh(even, 5, &minus);
  std::vector<std::string> flagged;
  for (const auto& c : checks.checks)
    if (c.status == CheckResult::Status::Fail) flagged.push_back(c.name);
  if (flagged.empty()) out.fail("compare_egh flags nothing against lambda-");
  std::string f;
  for (const auto& n : flagged) f += (f.empty() ? "" : ",") + n;
  if (out.pass) out.detail = "c = 2 differs at degree 2 and compare flags " + f;
  else out.detail += " (flagged: " + (f.empty() ? std::string("none") : f) + ")";
  return out;
}

Outcome criterion6() {
  Outcome out;
  std::size_t systems = 0, autonomous = 0;
  auto square = [&](const std::string& tag, const ChainComplex& c) {
    auto s = verify_square_zero(c);
    if (!s.ok) out.fail(tag + " d^2 != 0 at " + s.witness->first + " -> " + s.witness->second);
  };
  std::vector<std::pair<std::string, AutonomousData>> auts;
  for (const auto& n : fixture_names()) {
    auto f = fixture(n);
    std::vector<std::pair<std::string, MorseBottSystem>> sys;
    if (f.mbs) sys.emplace_back(n, *f.mbs);
    if (f.morphism) {
      sys.emplace_back(n + ".source", f.morphism->source);
      sys.emplace_back(n + ".target", f.morphism->target);
    }
    if (f.autonomous) {
      auts.emplace_back(n, *f.autonomous);
      square(n + " block", block_differential(*f.autonomous));
    }
    for (const auto& [tag, s] : sys) {
      ++systems;
      square(tag, build_ncc(s));
      auto base = nch_homology(s);
      for (int seed = 1; seed <= kBasepointSeeds; ++seed)
        if (!nch_homology(with_random_basepoints(s, seed)).same_groups(base))
          out.fail(tag + " homology changes with basepoint seed " + std::to_string(seed));
    }
  }
  for (long g = 1; g <= 2; ++g)
    for (long e = 1; e <= 2; ++e)
      for (long d = 1; d <= 3; ++d)
        auts.emplace_back("prequantization", prequantization(g, e, d));
  auts.emplace_back("period-doubling-minus", period_doubling(PDSide::Minus));
  for (long c : {-5, -3, -1, 1, 3, 5, 2}) auts.emplace_back("period-doubling-plus", period_doubling(PDSide::Plus, c, true));
  for (const auto& [tag, a] : auts) {
    ++autonomous;
    auto checks = autonomous_identities(a, 5);
    for (const auto& c : checks.checks)
      if (c.status == CheckResult::Status::Fail) out.fail(tag + " " + c.name + " " + c.detail);
  }
  if (out.pass)
    out.detail = std::to_string(systems) + " systems and " + std::to_string(autonomous) +
                 " autonomous data sets; basepoint seeds: " + std::to_string(kBasepointSeeds);
  return out;
}

Outcome criterion7() {
  Outcome out;
  auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(kSnfSeed);
  std::uniform_int_distribution<std::size_t> dim(1, kSnfMaxDim);
  for (int i = 0; i < kSnfTrials; ++i) {
    auto dense = oracle::random_dense(rng, dim(rng), dim(rng), kSnfEntryBound);
    auto m = IntMatrix::from_dense(dense);
    auto f = smith_normal_form(m);
    std::string tag = "matrix " + std::to_string(i);
    if ((f.u * m * f.v) != f.s) out.fail(tag + ": u m v != s");
    if (abs(determinant(f.u)) != 1 || abs(determinant(f.v)) != 1) out.fail(tag + ": not unimodular");
    auto want = oracle::invariant_factors_by_minors(dense);
    if (invariant_factors(m) != want) out.fail(tag + ": invariant factors disagree with minors");
    for (std::size_t k = 0; k < f.s.rows(); ++k)
      for (std::size_t j = 0; j < f.s.cols(); ++j)
        if (k != j && f.s.get(k, j) != 0) out.fail(tag + ": s is not diagonal");
  }
  double s = seconds_since(t0);
  if (s >= kOracleSeconds) out.fail("took " + std::to_string(s) + " s");
  if (out.pass) out.detail = std::to_string(kSnfTrials) + " matrices in " + std::to_string(s).substr(0, 5) + " s";
  return out;
}

Outcome criterion8() {
  Outcome out;
  std::mt19937_64 rng(8);
  std::size_t components = 0, values = 0, circles = 0;
  auto check_component = [&](const std::string& tag, const PLComponent& c, const Frame& f, const CirclePoint& pp,
                             const CirclePoint& pm, bool trivial) {
    ++components;
    for (Side side : {Side::Plus, Side::Minus}) {
      bool plus = side == Side::Plus;
      const auto& map = plus ? c.e_plus : c.e_minus;
      std::vector<CirclePoint> qs = {plus ? pp : pm};
      if (c.kind == ComponentKind::Circle)
        for (int i = 0; i < oracle::kRandomValuesPerMap; ++i) qs.push_back(oracle::random_regular_value(rng, map));
      for (std::size_t qi = 0; qi < qs.size(); ++qi) {
        const auto& q = qs[qi];
        bool at_basepoint = qi == 0;
        ++values;
        std::vector<Preimage> got;
        try {
          got = signed_preimages(c, side, q, f);
        } catch (const std::exception& e) {
          out.fail(tag + " threw at " + to_string(q) + ": " + e.what());
          continue;
        }
        // Away from the basepoints the frame flips are the only orientation input.
        auto want = oracle::dense_preimages(c, plus, q, f);
        bool same = got.size() == want.size();
        for (std::size_t i = 0; same && i < got.size(); ++i)
          same = got[i].t >= want[i].lo && got[i].t <= want[i].hi && got[i].sign == want[i].sign;
        if (!same) out.fail(tag + (plus ? " e+" : " e-") + " preimages of " + to_string(q) + " disagree");
        if (c.kind == ComponentKind::Circle && trivial && !at_basepoint) {
          long net = 0;
          for (const auto& p : got) net += p.sign;
          Rat w = map.winding();
          if (Rat(net * c.sign_start) != w)
            out.fail(tag + " net count " + std::to_string(net) + " vs winding " + to_string(w));
        }
      }
      if (c.kind == ComponentKind::Circle && trivial) ++circles;
    }
  };
  for (const auto& n : fixture_names()) {
    auto f = fixture(n);
    std::vector<std::pair<std::string, MorseBottSystem>> sys;
    if (f.mbs) sys.emplace_back(n, *f.mbs);
    if (f.autonomous) {
      try {
        sys.emplace_back(n + " realized", realize_as_system(*f.autonomous));
      } catch (const Unsupported&) {
      }
    }
    if (f.morphism) {
      sys.emplace_back(n + ".source", f.morphism->source);
      sys.emplace_back(n + ".target", f.morphism->target);
    }
    for (const auto& [tag, s] : sys)
      for (const auto& [pair, comps] : s.m1)
        for (std::size_t i = 0; i < comps.size(); ++i) {
          bool trivial = s.orbit(pair.first).good && s.orbit(pair.second).good;
          check_component(tag + " m1[" + pair_name(pair) + "][" + std::to_string(i) + "]", comps[i],
                          frame_for(s, pair), s.basepoint(pair.first), s.basepoint(pair.second), trivial);
        }
    if (f.morphism) {
      const auto& m = *f.morphism;
      for (const auto& [pair, comps] : m.phi1)
        for (std::size_t i = 0; i < comps.size(); ++i) {
          bool trivial = m.source.orbit(pair.first).good && m.target.orbit(pair.second).good;
          check_component(n + " phi1[" + pair_name(pair) + "][" + std::to_string(i) + "]", comps[i],
                          frame_for(m.source, pair.first, m.target, pair.second), m.source.basepoint(pair.first),
                          m.target.basepoint(pair.second), trivial);
        }
    }
  }
  if (components == 0) out.fail("no PL components found");
  if (out.pass)
    out.detail = std::to_string(components) + " components, " + std::to_string(values) +
                 " values, winding checked on " + std::to_string(circles) + " circle maps";
  return out;
}

int run_cli(const std::string& cli, const std::string& args) {
  std::string cmd = "\"" + cli + "\" " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

Outcome criterion9(const std::string& cli) {
  Outcome out;
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / ("cascadeho-mutations-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::set<int> kinds;
  std::size_t total = 0, refused = 0;
  auto write = [&](const std::string& file, const Fixture& f) {
    std::ofstream(dir / file) << io::dump_document(f);
    return (dir / file).string();
  };
  for (const auto& n : fixture_names()) {
    if (!cli.empty()) {
      int code = run_cli(cli, "validate \"" + write(n + ".json", fixture(n)) + "\"");
      if (code != 0) out.fail(n + " (unmutated) exits " + std::to_string(code));
    }
    for (const auto& m : mutations(n)) {
      ++total;
      std::string tag = n + "/" + mutation_name(m.kind);
      kinds.insert(static_cast<int>(m.kind));
      auto why = rejection(m.corrupted);
      if (!why) {
        out.fail(tag + " accepted");
        continue;
      }
      if (*why != m.expected) out.fail(tag + " refused for " + *why + ", built for " + m.expected);
      if (!cli.empty()) {
        int code = run_cli(cli, "validate \"" + write(n + "-" + std::to_string(int(m.kind)) + ".json", m.corrupted) + "\"");
        if (code != 1 && code != 2) {
          out.fail(tag + " CLI exit " + std::to_string(code));
          continue;
        }
      }
      ++refused;
    }
  }
  fs::remove_all(dir);
  if (kinds.size() != static_cast<std::size_t>(mutation_kind_count))
    out.fail("only " + std::to_string(kinds.size()) + " corruption classes exercised");
  if (cli.empty()) out.fail("CLI path not configured");
  if (out.pass)
    out.detail = std::to_string(refused) + "/" + std::to_string(total) + " mutants refused (exit 1 or 2), " +
                 std::to_string(kinds.size()) + " classes, 0 false accepts";
  return out;
}

Outcome criterion10() {
  Outcome out;
  auto triv = *fixture("trivial-cobordism").morphism;
  auto id = induced_chain_map(triv);
  if (id != IntMatrix::identity(ncc_generators(triv.source).size())) out.fail("trivial cobordism is not the identity");
  auto ip = *fixture("interval-pair").mbs;
  auto f = trivial_cobordism(ip);
  auto g = trivial_cobordism(f.target);
  auto composite = *fixture("trivial-cobordism-composite").morphism;
  if (induced_chain_map(composite) != chain_map_matrix(g) * chain_map_matrix(f))
    out.fail("stacked trivial cobordisms: composite differs from the product");
  auto phi = *fixture("phi-interval").morphism;
  auto before = trivial_cobordism(phi.source);
  auto h = phi;
  h.source = before.target;
  if (induced_chain_map(compose(before, h)) != chain_map_matrix(h) * chain_map_matrix(before))
    out.fail("cylinder then phi-interval: composite differs from the product");
  std::size_t maps = 0;
  for (const auto& n : fixture_names()) {
    auto fx = fixture(n);
    if (!fx.morphism) continue;
    ++maps;
    try {
      (void)induced_chain_map(*fx.morphism);
    } catch (const ChainMapFailure& e) {
      out.fail(n + ": " + e.what());
    }
  }
  for (const auto& [name, s] : std::vector<std::pair<std::string, MorseBottSystem>>{
           {"interval-pair", ip}, {"one-interval", *fixture("one-interval").mbs}}) {
    ++maps;
    auto t = trivial_cobordism(s);
    if (induced_chain_map(t) != IntMatrix::identity(ncc_generators(s).size()))
      out.fail(name + " cylinder is not the identity");
  }
  if (out.pass) out.detail = "identity, two stacked products, chain-map identity on " + std::to_string(maps) + " maps";
  return out;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"cascadeho acceptance suite"};
  int only = 0;
  std::string cli;
#ifdef CASCADEHO_CLI_PATH
  cli = CASCADEHO_CLI_PATH;
#endif
  app.add_option("--criterion", only, "Run a single criterion (1-10)")->check(CLI::Range(1, 10));
  app.add_option("--cli", cli, "Path to the cascadeho executable");
  CLI11_PARSE(app, argc, argv);

  std::vector<std::function<Outcome()>> all = {
      criterion1, criterion2, criterion3, criterion4, criterion5, criterion6, criterion7, criterion8,
      [&] { return criterion9(cli); }, criterion10,
  };
  bool ok = true;
  for (int i = 1; i <= 10; ++i) {
    if (only && i != only) continue;
    Outcome o;
    try {
      o = all[i - 1]();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::cout << "criterion " << i << (o.pass ? " PASS: " : " FAIL: ") << o.detail << std::endl;
    ok = ok && o.pass;
  }
  return ok ? 0 : 1;
}
