#pragma once

// Serialization: system documents (JSON), constraint derivation from raw
// vector lists, DIMACS CNF, certificate text, descent path records and SVG
// figures in the gnomonic plane.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kscolor/certificate.hpp"
#include "kscolor/csp.hpp"
#include "kscolor/descent.hpp"
#include "kscolor/geom.hpp"

namespace ks::formats {

inline constexpr int kSystemSchemaVersion = 1;

struct DeriveOptions {
  bool triples = false;
  bool pairs = false;
  bool spans = false;

  bool any() const { return triples || pairs || spans; }
  bool operator==(const DeriveOptions&) const = default;
};

/// A system file: points with ids (the system's labels), explicit
/// constraints, derivation flags, optional tolerance overrides, and an
/// optional tour with its corner triple for certificate generation.
struct SystemDoc {
  csp::ConstraintSystem system;
  DeriveOptions derive;
  std::optional<Tolerances> tolerances;
  std::vector<std::size_t> circuit;
  std::optional<std::array<std::size_t, 3>> corners;

  Tolerances tol() const { return tolerances.value_or(kDefaultTolerances); }
};

bool operator==(const SystemDoc& a, const SystemDoc& b);

/// Throws ParseError (with line or field), DuplicateId or ZeroVector.
/// Vectors are normalized and sign-canonicalized.
SystemDoc parse_system(std::string_view text);
/// Deterministic; numbers use the shortest representation that reads back to
/// the same double.
std::string write_system(const SystemDoc& doc);

/// The explicit constraints plus everything the derivation flags ask for.
csp::ConstraintSystem materialize(const SystemDoc& doc);

inline constexpr std::size_t kMaxDerivePoints = 500;

/// Scans a point list for the relations the colouring rules use:
///   triples: every mutually orthogonal index triple
///   pairs:   orthogonal pairs not inside an emitted triple
///   spans:   every (c; a, b), a < b non-parallel, c != a, b, |det| < tol.orth
/// Labels are carried over. Throws TooManyPoints beyond kMaxDerivePoints.
csp::ConstraintSystem derive_constraints(const std::vector<ProjPoint>& points, const std::vector<std::string>& labels,
                                         const DeriveOptions& opts, const Tolerances& tol = kDefaultTolerances);

/// Reads "id x y z" lines ('#' starts a comment). Throws ParseError,
/// DuplicateId, ZeroVector.
SystemDoc parse_vector_list(std::string_view text);

/// "c <var> <label>" comments, "p cnf V C", then one zero-terminated clause
/// per line.
std::string write_dimacs(const csp::CnfDoc& cnf);

std::string write_certificate(const csp::Certificate& cert);
/// Throws ParseError with the offending line number.
csp::Certificate parse_certificate(std::string_view text);

/// Descent path as JSON: frame axes, points (vector, lat/lon) and steps.
std::string write_path_json(const descent::Path& path);
/// One line per point and step, for terminals.
std::string write_path_text(const descent::Path& path);

struct SvgPoint {
  std::string label;
  UnitVec v;
};

struct SvgChain {
  std::string name;
  std::vector<UnitVec> points;
};

struct SvgLayers {
  std::vector<double> latitude_circles_deg;  ///< e.g. {30, 60}
  std::vector<SvgPoint> points;
  std::vector<SvgChain> chains;
};

/// SVG 1.1 document whose user coordinates are gnomonic plane coordinates
/// (y flipped by a group transform), so every circle centre and polyline
/// vertex is exactly gnomonic() of its vector, printed with 17 significant
/// digits. Points are lines: the northern representative is plotted.
/// Throws EquatorOrSouthern for points on the frame's equator.
std::string render_svg(const Frame& frame, const SvgLayers& layers, const Tolerances& tol = kDefaultTolerances);

}  // namespace ks::formats
