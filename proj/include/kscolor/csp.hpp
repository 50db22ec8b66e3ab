#pragma once

// Red/green colouring constraints over a finite set of directions.
//
//   TRIPLE(a,b,c)  mutually orthogonal: exactly one of a, b, c is red
//   PAIR(a,b)      orthogonal: at most one of a, b is red
//   SPAN(c; a,b)   c in span{a,b}: if a and b are green, c is green
//
// Red is "true" throughout: CNF variable i+1 is point i being red.

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "kscolor/geom.hpp"

namespace ks::csp {

enum class Color : std::uint8_t { Unset, Red, Green };

struct Literal {
  std::size_t point = 0;
  bool red = true;

  Literal negated() const { return {point, !red}; }
  Color color() const { return red ? Color::Red : Color::Green; }
  bool operator==(const Literal&) const = default;
};

struct Triple {
  std::array<std::size_t, 3> p{};
  bool operator==(const Triple&) const = default;
};
struct Pair {
  std::array<std::size_t, 2> p{};
  bool operator==(const Pair&) const = default;
};
struct Span {
  std::size_t c = 0;  ///< forced point
  std::size_t a = 0;  ///< witnesses
  std::size_t b = 0;
  bool operator==(const Span&) const = default;
};

enum class Kind : std::uint8_t { Triple, Pair, Span };

/// Names one constraint of a system; printed as T<i>, P<i> or S<i>.
struct ConstraintRef {
  Kind kind = Kind::Triple;
  std::size_t index = 0;
  bool operator==(const ConstraintRef&) const = default;
};

std::string to_string(const ConstraintRef& ref);
/// Parses "T12" style names; nullopt on malformed input.
std::optional<ConstraintRef> parse_constraint_ref(const std::string& text);

struct ConstraintSystem {
  std::vector<ProjPoint> points;
  std::vector<std::string> labels;  ///< empty, or one per point
  std::vector<Triple> triples;
  std::vector<Pair> pairs;
  std::vector<Span> spans;

  std::size_t size() const { return points.size(); }
  std::size_t constraint_count() const { return triples.size() + pairs.size() + spans.size(); }
  bool contains(const ConstraintRef& ref) const;
  /// Point indices of a constraint; for spans the order is (c, a, b).
  std::vector<std::size_t> members(const ConstraintRef& ref) const;
  /// Label of point i, or "p<i>" when the system has no labels.
  std::string label(std::size_t i) const;
  std::optional<std::size_t> find_label(const std::string& name) const;
  /// The TRIPLE over exactly these three points, if present.
  std::optional<ConstraintRef> find_triple(std::array<std::size_t, 3> pts) const;

  /// Throws BadIndex when an index is out of range, a constraint repeats a
  /// point, or a record is duplicated.
  void check() const;
  /// Drops duplicate records (triples and pairs as sets, spans with the
  /// witness pair unordered) and orders span witnesses a < b.
  void dedup_constraints();
};

using Coloring = std::vector<Color>;

/// Total colouring satisfies every constraint. Written directly from the
/// constraint definitions, not through the inference rules.
bool is_valid_coloring(const ConstraintSystem& sys, std::span<const Color> coloring);

// ---------------------------------------------------------------------------
// Single-constraint inference, shared by propagation and certificate replay.

struct Inference {
  Literal lit;
  std::array<Literal, 2> premises{};
  std::uint8_t premise_count = 0;

  std::span<const Literal> premise_span() const { return {premises.data(), premise_count}; }
};

/// True when the constraint is already violated by the assigned points.
bool falsified(const ConstraintSystem& sys, const ConstraintRef& ref, std::span<const Color> partial);

/// Literals on currently unset points forced by this one constraint. Assumes
/// the constraint is not falsified.
void consequences(const ConstraintSystem& sys, const ConstraintRef& ref, std::span<const Color> partial,
                  std::vector<Inference>& out);

// ---------------------------------------------------------------------------

struct Propagation {
  std::optional<ConstraintRef> conflict;
};

struct TraceEntry {
  Inference inference;
  ConstraintRef by;
};

/// Extends `coloring` to the least fixed point of the single-constraint
/// rules. Stops at the first falsified constraint and reports it. When
/// `trace` is given every inference is appended in derivation order.
Propagation propagate(const ConstraintSystem& sys, Coloring& coloring, std::vector<TraceEntry>* trace = nullptr);

struct Valid {
  Coloring coloring;
};
struct Uncolorable {};
using Verdict = std::variant<Valid, Uncolorable>;

struct SolveStats {
  std::uint64_t nodes = 0;
  std::uint64_t conflicts = 0;
};

/// Complete backtracking search with propagation at every node; branches on
/// the lowest-index unset point, red first. `assumptions` may pre-assign
/// points (empty means none).
Verdict solve(const ConstraintSystem& sys, const Coloring& assumptions = {}, SolveStats* stats = nullptr);

inline constexpr std::size_t kMaxEnumerationPoints = 24;

/// Exact number of valid total colourings by exhaustive enumeration.
/// Throws TooLarge beyond kMaxEnumerationPoints points.
std::uint64_t count_colorings(const ConstraintSystem& sys);

struct CnfDoc {
  std::size_t variables = 0;
  std::vector<std::vector<int>> clauses;
  std::map<int, std::string> comments;  ///< variable -> point label
};

CnfDoc to_cnf(const ConstraintSystem& sys);

}  // namespace ks::csp
