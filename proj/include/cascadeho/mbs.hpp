#pragma once

#include "cascadeho/exactalg.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cascadeho {

struct Orbit {
  std::string id;
  long d = 1;     // covering multiplicity
  int parity = 0; // CZ mod 2
  std::optional<long> grading;
  bool good = true;
  Rat action = 1;
  std::string homotopy_class;
};

// Points of an orbit circle are rationals in [0,1), oriented by the Reeb flow.
using CirclePoint = Rat;
Rat frac(const Rat& x); // x - floor(x)

struct SignedPoint {
  CirclePoint e_plus = 0, e_minus = 0;
  int sign = 1;
};

struct Breakpoint {
  Rat t, value;
};

// Piecewise-linear lift to the universal cover, t in [0,1].
struct PLMap {
  std::vector<Breakpoint> points;

  Rat eval(const Rat& t) const;       // t in [0,1]
  Rat slope_at(const Rat& t) const;   // t strictly inside a segment
  Rat winding() const;                // lift(1) - lift(0)
};

// Which moduli family a boundary label refers to.
enum class Family { M0, M1, Phi0, Phi1 };
const char* family_name(Family f);

struct PieceRef {
  Family family = Family::M0;
  std::size_t index = 0;
  std::optional<Rat> t; // parameter on the 1-dimensional piece
};

// A broken configuration (upper piece in (γ₊, via), lower piece in (via, γ₋)).
// Exactly one of the two pieces is 1-dimensional and carries t.
struct BoundaryLabel {
  std::string via;
  PieceRef upper, lower;
};

enum class ComponentKind { Circle, Interval };

struct PLComponent {
  ComponentKind kind = ComponentKind::Circle;
  PLMap e_plus, e_minus;
  int sign_start = 1;
  std::optional<BoundaryLabel> start_label, end_label; // intervals only
};

using OrbitPair = std::pair<std::string, std::string>;

struct MorseBottSystem {
  GradingMode mode;
  std::map<std::string, Orbit> orbits;
  std::map<std::string, CirclePoint> basepoints;
  std::map<OrbitPair, std::vector<SignedPoint>> m0;
  std::map<OrbitPair, std::vector<PLComponent>> m1;
  std::map<OrbitPair, Int> m2cc;

  const Orbit& orbit(const std::string& id) const;
  CirclePoint basepoint(const std::string& id) const;
};

// Orientation data needed to read signs on one PL component.
struct Frame {
  bool bad_plus = false, bad_minus = false;
  CirclePoint p_plus = 0, p_minus = 0;
};
Frame frame_for(const MorseBottSystem& plus_sys, const std::string& plus,
                const MorseBottSystem& minus_sys, const std::string& minus);
Frame frame_for(const MorseBottSystem& sys, const OrbitPair& pair);

enum class Side { Plus, Minus };

struct Crossing {
  Rat t;
  int dir = 1; // +1 if the lift increases through the value
};

// All t where the lift meets a lift of q. Throws NonRegularValue when q is the
// image of a breakpoint or a segment is constant at q.
std::vector<Crossing> crossings(const PLMap& map, ComponentKind kind, const CirclePoint& q);

// Orientation at parameter t. When the point sits exactly on the basepoint of a
// bad orbit on side `constrained`, the frame is read on the arc just after the
// basepoint, i.e. the flip counts when the crossing is increasing.
int orientation_at(const PLComponent& comp, const Frame& frame, const Rat& t,
                   std::optional<Side> constrained = std::nullopt, int crossing_dir = 0);
// Orientation at the far end t = 1 (after every flip on (0,1)).
int orientation_at_end(const PLComponent& comp, const Frame& frame);

struct Preimage {
  Rat t;
  CirclePoint residual; // the other evaluation map at t
  int sign = 1;
};

std::vector<Preimage> signed_preimages(const PLComponent& comp, Side side, const CirclePoint& q,
                                       const Frame& frame = {});

bool cyclically_ordered(const CirclePoint& p, const CirclePoint& a, const CirclePoint& b);
int transport_sign(const Orbit& orbit, int raw, long windings);

struct Violation {
  std::string code;
  std::string location;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has(const std::string& code) const;
  void add(std::string code, std::string location, std::string message) {
    violations.push_back({std::move(code), std::move(location), std::move(message)});
  }
  void merge(const ValidationReport& o, const std::string& prefix = "");
};

ValidationReport validate_orbits(const std::map<std::string, Orbit>& orbits,
                                 const GradingMode& mode, const std::string& where = "");
ValidationReport validate_system(const MorseBottSystem& sys);

// Every value a basepoint of `orbit` must avoid, as circle points.
std::vector<CirclePoint> evaluation_values(const MorseBottSystem& sys, const std::string& orbit);
// Fills missing basepoints: 0, or 1/(2*prime(index + k)) for the first k that
// avoids the data. Index is the orbit position in id order.
MorseBottSystem with_default_basepoints(MorseBottSystem sys);
// All basepoints replaced by seeded random generic values.
MorseBottSystem with_random_basepoints(MorseBottSystem sys, std::uint64_t seed);
// True if p avoids `values` and is a regular value of every PL map on the orbit.
bool basepoint_generic(const MorseBottSystem& sys, const std::string& orbit, const CirclePoint& p);

std::string pair_name(const OrbitPair& p);

} // namespace cascadeho
