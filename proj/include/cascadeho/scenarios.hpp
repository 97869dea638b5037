#pragma once

#include "cascadeho/autonomous.hpp"
#include "cascadeho/mbs.hpp"
#include "cascadeho/morphism.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cascadeho {

// Circle bundle of Euler number e over a genus-g surface, orbits of multiplicity d.
// `sign` picks the sign of the doubly constrained coefficient (+de or -de).
AutonomousData prequantization(long g, long e, long d, int sign = 1);

enum class PDSide { Minus, Plus };
// Before (minus) and after (plus) a period-doubling bifurcation. The plus side
// takes the unknown coefficient c, which must be odd unless allow_even is set.
AutonomousData period_doubling(PDSide side, long c = 1, bool allow_even = false);

enum class FixtureKind { Mbs, Autonomous, Morphism };
const char* kind_name(FixtureKind k);

struct Fixture {
  std::string name;
  FixtureKind kind = FixtureKind::Mbs;
  std::optional<MorseBottSystem> mbs;
  std::optional<AutonomousData> autonomous;
  std::optional<MorphismData> morphism;
};

std::vector<std::string> fixture_names();
Fixture fixture(const std::string& name); // throws UnknownFixture

// Why a corrupted object is refused: a violation code, "SquareNonzero" or
// "ChainMapFailure". Empty when the object is accepted.
std::optional<std::string> rejection(const Fixture& f);

enum class MutationKind {
  ParityBreak = 1,
  ActionBreak,
  BasepointCollision,
  OddWindingBadCircle,
  LabelSignFlip,
  LabelEvalMismatch,
  MissingBrokenPair,
  ExtraSlot,
  DuNonDivisor,
  SquareBreakingExtra,
};
constexpr int mutation_kind_count = 10;
const char* mutation_name(MutationKind k);

struct Mutation {
  MutationKind kind;
  std::string expected; // the code the corruption is designed to trigger
  Fixture corrupted;
};

// One corrupted variant per kind that has something to corrupt in this fixture.
std::vector<Mutation> mutations(const std::string& name);

} // namespace cascadeho
