#pragma once

// The explicit uncolourable configuration: a closed tour of 30 degree steps
// from the pole down to the equator, along it and back up, with one gadget
// per tour edge forcing "source red => target red".

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "kscolor/csp.hpp"
#include "kscolor/descent.hpp"
#include "kscolor/geom.hpp"

namespace ks::construct {

/// Collects labelled points and constraints on point handles, then merges
/// points that coincide projectively (within tol.merge radians).
///
/// The merged system does not depend on insertion order: clusters are
/// represented by their lexicographically smallest canonical vector, points
/// are sorted by that vector, labels go to the lowest (priority, label), and
/// constraint records are sorted.
class SystemBuilder {
 public:
  explicit SystemBuilder(const Tolerances& tol = kDefaultTolerances) : tol_(tol) {}

  std::size_t add_point(const UnitVec& v, std::string label, int priority = 1);
  void add_triple(std::size_t a, std::size_t b, std::size_t c) { triples_.push_back({a, b, c}); }
  void add_pair(std::size_t a, std::size_t b) { pairs_.push_back({a, b}); }
  void add_span(std::size_t c, std::size_t a, std::size_t b) { spans_.push_back({c, a, b}); }

  struct Result {
    csp::ConstraintSystem system;
    std::vector<std::size_t> index_of;  ///< handle -> point index in `system`
  };
  /// Throws BadIndex if merging collapses two points of one constraint.
  Result finish() const;

 private:
  struct Entry {
    ProjPoint point;
    std::string label;
    int priority;
  };
  Tolerances tol_;
  std::vector<Entry> entries_;
  std::vector<std::array<std::size_t, 3>> triples_;
  std::vector<std::array<std::size_t, 2>> pairs_;
  std::vector<std::array<std::size_t, 3>> spans_;  // (c, a, b)
};

struct Circuit {
  std::vector<UnitVec> points;        ///< cyclic tour starting at the pole
  std::vector<std::string> labels;    ///< N, A, B, ... for the default step
  std::array<std::size_t, 3> corners{};  ///< pole, (1,0,0), (0,1,0)
  double step_deg = 30.0;
};

/// Tour in the standard frame with 90/step_deg steps per leg. Throws BadStep
/// unless step_deg divides 90.
Circuit build_circuit(double step_deg = 30.0);

struct Gadget {
  UnitVec pole;
  UnitVec target;        ///< sign chosen so that dot(pole, target) > 0
  Frame frame;           ///< pole, meridian 0 through target
  UnitVec target_e;      ///< e_point(target) = frame.e2()
  UnitVec target_perp;   ///< perp_point(target)
  descent::Path chain;   ///< target -> target_perp
  std::vector<UnitVec> helpers;  ///< e_point of every chain point but the last
};

/// Gadget for target at angle `angle_deg` from pole (30 for the tour).
/// Throws BadAngle when proj_angle(pole, target) differs from angle_deg by
/// more than tol.ang; descent errors propagate (angles >= 45 have no
/// southerly perp point).
Gadget build_gadget(const UnitVec& pole, const UnitVec& target, double angle_deg = 30.0,
                    const Tolerances& tol = kDefaultTolerances);

/// Adds the gadget's points and constraints:
///   TRIPLE(pole, e1, e2), TRIPLE(target, target_e, target_perp),
///   SPAN(h; e1, e2) for each helper distinct from e1/e2,
///   SPAN(psi_{i+1}; psi_i, helper_i) for each chain step.
/// Returns handles of (pole, target).
std::array<std::size_t, 2> emit_gadget(SystemBuilder& builder, const Gadget& g, const std::string& name,
                                       const std::string& pole_label, const std::string& target_label);

struct Construction {
  csp::ConstraintSystem system;
  std::vector<std::size_t> circuit;      ///< point indices in tour order
  std::array<std::size_t, 3> corners{};  ///< point indices of the corner TRIPLE
  std::vector<Gadget> gadgets;           ///< one per tour edge, in tour order
};

Construction build_construction(double step_deg = 30.0, const Tolerances& tol = kDefaultTolerances);

inline csp::ConstraintSystem build_system(double step_deg = 30.0, const Tolerances& tol = kDefaultTolerances) {
  return build_construction(step_deg, tol).system;
}

/// One gadget as a standalone system; `pole` and `target` are its indices.
struct GadgetSystem {
  csp::ConstraintSystem system;
  std::size_t pole = 0;
  std::size_t target = 0;
};
GadgetSystem gadget_system(const Gadget& g, const Tolerances& tol = kDefaultTolerances);

struct GeometryViolation {
  csp::ConstraintRef ref;
  std::string what;
};

/// Checks that every constraint is licensed by the geometry: TRIPLE and PAIR
/// members orthogonal, SPAN witnesses non-parallel with the forced point in
/// their plane (|det| < tol.orth).
std::vector<GeometryViolation> validate_geometry(const csp::ConstraintSystem& sys,
                                                 const Tolerances& tol = kDefaultTolerances);

}  // namespace ks::construct
