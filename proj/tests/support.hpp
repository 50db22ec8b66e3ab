#pragma once

// Generators for randomized tests. Everything is driven by an explicit
// std::mt19937_64 so runs are reproducible.

#include <cmath>
#include <random>
#include <vector>

#include "kscolor/csp.hpp"
#include "kscolor/formats.hpp"
#include "kscolor/geom.hpp"

namespace ks::testing {

inline UnitVec random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  for (;;) {
    const Vec3 v{g(rng), g(rng), g(rng)};
    if (norm(v) > 1e-3) return UnitVec::normalized(v);
  }
}

/// Random unit vector orthogonal to `p`.
inline UnitVec random_orthogonal(std::mt19937_64& rng, const UnitVec& p) {
  for (;;) {
    const Vec3 r = random_unit(rng).vec();
    const Vec3 q = r - dot(r, p.vec()) * p.vec();
    if (norm(q) > 1e-3) return UnitVec::normalized(q);
  }
}

/// Points built from orthogonal frames and in-plane combinations so that
/// derived constraints are plentiful, then constraints auto-derived.
inline csp::ConstraintSystem random_geometric_system(std::mt19937_64& rng, std::size_t max_points) {
  std::vector<UnitVec> pts;
  std::uniform_int_distribution<int> pick_kind(0, 9);
  std::uniform_real_distribution<double> angle(0.2, 1.4);
  const UnitVec a = random_unit(rng);
  const UnitVec b = random_orthogonal(rng, a);
  pts = {a, b, UnitVec::normalized(cross(a.vec(), b.vec()))};
  while (pts.size() < max_points) {
    std::uniform_int_distribution<std::size_t> pick(0, pts.size() - 1);
    const int kind = pick_kind(rng);
    if (kind < 5 && pts.size() + 2 <= max_points) {
      // new orthogonal frame through an existing point
      const UnitVec p = pts[pick(rng)];
      const UnitVec q = random_orthogonal(rng, p);
      pts.push_back(q);
      pts.push_back(UnitVec::normalized(cross(p.vec(), q.vec())));
    } else if (kind < 9) {
      // a point in the plane of two existing ones
      const std::size_t i = pick(rng);
      std::size_t j = pick(rng);
      if (i == j) continue;
      const double t = angle(rng);
      const Vec3 v = std::cos(t) * pts[i].vec() + std::sin(t) * pts[j].vec();
      if (norm(v) < 1e-3) continue;
      pts.push_back(UnitVec::normalized(v));
    } else {
      pts.push_back(random_unit(rng));
    }
  }
  std::vector<ProjPoint> proj;
  for (const auto& p : pts) proj.push_back(canonicalize(p));
  return formats::derive_constraints(proj, {}, {true, true, true});
}

/// Purely combinatorial system on n points (vectors are placeholders).
inline csp::ConstraintSystem random_abstract_system(std::mt19937_64& rng, std::size_t n, std::size_t triples,
                                                   std::size_t pairs, std::size_t spans) {
  csp::ConstraintSystem sys;
  for (std::size_t i = 0; i < n; ++i) sys.points.push_back(canonicalize(UnitVec::checked({0, 0, 1})));
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  auto distinct3 = [&]() {
    for (;;) {
      std::array<std::size_t, 3> a{pick(rng), pick(rng), pick(rng)};
      if (a[0] != a[1] && a[0] != a[2] && a[1] != a[2]) return a;
    }
  };
  for (std::size_t k = 0; k < triples; ++k) sys.triples.push_back({distinct3()});
  for (std::size_t k = 0; k < pairs; ++k) {
    const auto a = distinct3();
    sys.pairs.push_back({{a[0], a[1]}});
  }
  for (std::size_t k = 0; k < spans; ++k) {
    const auto a = distinct3();
    sys.spans.push_back({a[0], a[1], a[2]});
  }
  sys.dedup_constraints();
  return sys;
}

/// Number of satisfying assignments of a CNF by enumeration (bit i = var i+1).
inline std::vector<std::uint32_t> cnf_models(const csp::CnfDoc& cnf) {
  std::vector<std::uint32_t> models;
  const std::uint64_t total = std::uint64_t{1} << cnf.variables;
  for (std::uint64_t m = 0; m < total; ++m) {
    bool ok = true;
    for (const auto& clause : cnf.clauses) {
      bool sat = false;
      for (int lit : clause) {
        const bool value = (m >> (std::abs(lit) - 1)) & 1u;
        if ((lit > 0) == value) {
          sat = true;
          break;
        }
      }
      if (!sat) {
        ok = false;
        break;
      }
    }
    if (ok) models.push_back(static_cast<std::uint32_t>(m));
  }
  return models;
}

inline csp::Coloring coloring_from_mask(std::size_t n, std::uint32_t mask) {
  csp::Coloring c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = ((mask >> i) & 1u) ? csp::Color::Red : csp::Color::Green;
  return c;
}

}  // namespace ks::testing
