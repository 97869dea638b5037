#pragma once

#include "cascadeho/exactalg.hpp"
#include "cascadeho/mbs.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cascadeho {

enum class Flavor { Check, Hat };

struct Generator {
  std::string orbit;
  Flavor flavor = Flavor::Check;

  std::string id() const; // "check(a)" / "hat(a)"
  bool operator==(const Generator& o) const { return orbit == o.orbit && flavor == o.flavor; }
};

std::optional<Generator> parse_generator(const std::string& id);

// One piece of a cascade.
struct CascadePiece {
  enum class Kind {
    Point,       // element of m0
    TopPoint,    // e_+ = p on an m1 component (check at the top)
    BottomPoint, // e_- = p on an m1 component (hat at the bottom)
    DoubleCount, // the supplied m2cc count
    Synthetic,   // one of the two points for hat(a) -> check(a)
    PhiPoint,    // element of phi0 (morphism cascades)
    PhiTop,      // phi1 component constrained at the source basepoint
    PhiBottom,   // phi1 component constrained at the target basepoint
    PhiDouble,   // the supplied phi2cc count
  };
  Kind kind = Kind::Point;
  std::string plus, minus;
  std::size_t index = 0; // into m0 / m1 of (plus, minus)
  std::optional<Rat> t;  // constrained pieces
  CirclePoint e_plus = 0, e_minus = 0;
  Int weight = 1;        // signed contribution of this piece
};

struct Cascade {
  std::vector<CascadePiece> pieces;
  std::vector<std::string> intermediates;
  Int sign = 1; // product of piece weights
};

// Dimension-0 cascades from src to dst. Throws NonGenericConfiguration when a
// cyclic-order test meets coincident points.
std::vector<Cascade> enumerate_cascades(const MorseBottSystem& sys, const Generator& src,
                                        const Generator& dst);

// Continues `chain` (whose last piece, if any, arrived at `at`) through m0
// points of `sys` to `beta`, ending with a bottom-constrained m1 point when
// hat_end is set. Calls emit for each completed chain.
void extend_cascades(const MorseBottSystem& sys, const std::string& at, const std::string& beta,
                     bool hat_end, std::vector<CascadePiece>& chain,
                     const std::function<void(const std::vector<CascadePiece>&)>& emit);

// Generators ordered by action (descending), then orbit id, check before hat.
std::vector<Generator> ncc_generators(const MorseBottSystem& sys);
ChainComplex build_ncc(const MorseBottSystem& sys);

// Drops orbits with action >= bound together with every moduli entry touching them.
MorseBottSystem restrict_action(const MorseBottSystem& sys, const Rat& bound);
MorseBottSystem restrict_class(const MorseBottSystem& sys, const std::string& cls);

HomologyResult nch_homology(const MorseBottSystem& sys,
                            const std::optional<Rat>& action_bound = std::nullopt);

// Grading of a generator in the system's mode.
long generator_grading(const Orbit& o, Flavor f);

} // namespace cascadeho
