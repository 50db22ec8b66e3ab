#pragma once

// Chains of great-circle descents. Any point strictly south of a start point
// is reachable by finitely many descents; plan() constructs such a chain in
// closed form and validate() re-checks one independently.

#include <cstddef>
#include <string>
#include <vector>

#include "kscolor/geom.hpp"

namespace ks::descent {

struct Step {
  double beta_deg = 0.0;  ///< signed, 0 < |beta| < 90
  UnitVec from;
  UnitVec to;
};

struct Path {
  Frame frame;
  std::vector<UnitVec> points;  ///< psi_0 ... psi_n
  std::vector<Step> steps;      ///< n entries
};

struct Violation {
  std::size_t index;  ///< offending point (or step) index
  std::string what;
};

/// Plans a descent chain from `from` to the strictly more southerly `to`.
///
/// Policy: in the gnomonic plane a step of plane angle beta multiplies the
/// radius by sec(beta). With start radius r, target radius R and signed
/// longitude gap dphi in (-180, 180], take the smallest n with
/// sec(dphi/n)^n <= R/r, emit n equal steps and then a zigzag (+g, -g) with
/// sec^2(g) = (R/r) / sec(dphi/n)^n. The zigzag is omitted when g is below
/// tol.ang.
///
/// Throws DegenerateEndpoint for pole/equator endpoints and NotMoreSoutherly
/// unless lat(to) < lat(from).
Path plan(const Frame& f, const LatLon& from, const LatLon& to, const Tolerances& tol = kDefaultTolerances);

/// Checks every path invariant by recomputation; empty result means valid.
std::vector<Violation> validate(const Path& path, const Tolerances& tol = kDefaultTolerances);

}  // namespace ks::descent
