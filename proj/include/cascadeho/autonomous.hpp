#pragma once

#include "cascadeho/exactalg.hpp"
#include "cascadeho/mbs.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cascadeho {

struct CylinderRecord {
  int epsilon = 1;
  long du = 1;
};

// Keys of `extra` are generator ids, (source, target), e.g. ("check(p)", "hat(r)").
using GeneratorPair = std::pair<std::string, std::string>;

struct AutonomousData {
  GradingMode mode;
  std::map<std::string, Orbit> orbits;
  std::map<OrbitPair, std::vector<CylinderRecord>> mj1;
  std::map<GeneratorPair, Int> extra;
};

ValidationReport validate_autonomous(const AutonomousData& data);

// Good orbits in generator order (action descending, then id).
std::vector<std::string> good_orbits(const AutonomousData& data);

RatMatrix delta(const AutonomousData& data);            // column = source, row = target
RatMatrix kappa(const AutonomousData& data);            // diag(d) on good orbits
RatMatrix egh_differential(const AutonomousData& data); // delta * kappa
std::map<HomologyKey, std::size_t> egh_homology(const AutonomousData& data);

// Nonequivariant complex in block form. Throws SquareNonzero.
ChainComplex block_differential(const AutonomousData& data);
// Check -> d * hat on good orbits, in the generator order of block_differential.
IntMatrix bv_operator(const AutonomousData& data);

// Truncated complex on NCC (x) span{1, U, ..., U^K}; generator ids "check(a)U^k".
ChainComplex equivariant_differential(const AutonomousData& data, long K);

struct EquivariantResult {
  HomologyResult homology;     // groups above the stable range are flagged unstable
  bool truncation_consistent = true;
  std::string truncation_witness;
};
EquivariantResult equivariant_homology(const AutonomousData& data, long K);
// Top certified degree for truncation K, when gradings are integral.
std::optional<long> stable_range(const AutonomousData& data, long K);

struct CheckResult {
  enum class Status { Pass, Fail, Skip };
  std::string name;
  Status status = Status::Pass;
  std::string detail;
};
const char* status_name(CheckResult::Status s);

struct CheckList {
  std::vector<CheckResult> checks;
  bool ok() const;
  void add(std::string name, bool pass, std::string detail = {});
  void skip(std::string name, std::string detail);
};

// Matrix identities of the autonomous block structure.
CheckList autonomous_identities(const AutonomousData& data, long K = 2);

// Steps (i)-(iv) of the cylindrical comparison, optionally followed by a
// comparison of every invariant against a reference system.
CheckList compare_egh(const AutonomousData& data, long K,
                      const AutonomousData* reference = nullptr);

// Keeps orbits below the action bound and in the given class, with the data among them.
AutonomousData restrict_autonomous(const AutonomousData& data, const std::optional<Rat>& action_bound,
                                   const std::optional<std::string>& cls);

// A Morse-Bott system whose cascade complex is block_differential(data).
// Throws Unsupported for extra entries it cannot realize.
MorseBottSystem realize_as_system(const AutonomousData& data);

} // namespace cascadeho
