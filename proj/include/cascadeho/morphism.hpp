#pragma once

#include "cascadeho/cascade.hpp"
#include "cascadeho/mbs.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cascadeho {

// Algebraic data of a cobordism between two Morse-Bott systems. Pairs are
// (source orbit, target orbit). Boundary labels on phi1 intervals break
// either at the top (via a source orbit: upper piece m0/m1 of the source,
// lower piece phi0/phi1) or at the bottom (via a target orbit: upper piece
// phi0/phi1, lower piece m0/m1 of the target).
struct MorphismData {
  MorseBottSystem source, target;
  std::map<OrbitPair, std::vector<SignedPoint>> phi0;
  std::map<OrbitPair, std::vector<PLComponent>> phi1;
  std::map<OrbitPair, Int> phi2cc;                 // doubly constrained count
  std::map<OrbitPair, bool> action_nonincrease;    // absent means true
  std::string construction;                        // "trivial" for trivial_cobordism output
};

ValidationReport validate_morphism(const MorphismData& m);

struct MorphismCascade {
  std::vector<CascadePiece> pieces; // Point pieces between systems carry the phi index
  Int sign = 1;
};

std::vector<MorphismCascade> enumerate_morphism_cascades(const MorphismData& m, const Generator& src,
                                                         const Generator& dst);

// Rows: target generators; columns: source generators (ncc_generators order).
// Throws ChainMapFailure when d_target * phi != phi * d_source.
IntMatrix induced_chain_map(const MorphismData& m);
IntMatrix chain_map_matrix(const MorphismData& m); // same entries, no identity check

// The cylinder R x S over `sys`, landing in a copy of `sys` whose basepoints are
// shifted forward by less than half the gap to the nearest evaluation value.
MorphismData trivial_cobordism(const MorseBottSystem& sys);

// Composite g o f (f.target must be g.source). Supported when one factor is a
// trivial cobordism; otherwise throws Unsupported. Throws NonGenericConfiguration
// when the cylinder's moved basepoints land on evaluation data of the other factor.
MorphismData compose(const MorphismData& f, const MorphismData& g);

} // namespace cascadeho
