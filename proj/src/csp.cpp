#include "kscolor/csp.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <set>
#include <tuple>

#include "kscolor/error.hpp"

namespace ks::csp {

std::string to_string(const ConstraintRef& ref) {
  const char tag = ref.kind == Kind::Triple ? 'T' : ref.kind == Kind::Pair ? 'P' : 'S';
  return tag + std::to_string(ref.index);
}

std::optional<ConstraintRef> parse_constraint_ref(const std::string& text) {
  if (text.size() < 2) return std::nullopt;
  ConstraintRef ref;
  switch (text[0]) {
    case 'T': ref.kind = Kind::Triple; break;
    case 'P': ref.kind = Kind::Pair; break;
    case 'S': ref.kind = Kind::Span; break;
    default: return std::nullopt;
  }
  std::size_t value = 0;
  for (std::size_t i = 1; i < text.size(); ++i) {
    if (text[i] < '0' || text[i] > '9') return std::nullopt;
    value = value * 10 + static_cast<std::size_t>(text[i] - '0');
  }
  ref.index = value;
  return ref;
}

bool ConstraintSystem::contains(const ConstraintRef& ref) const {
  switch (ref.kind) {
    case Kind::Triple: return ref.index < triples.size();
    case Kind::Pair: return ref.index < pairs.size();
    case Kind::Span: return ref.index < spans.size();
  }
  return false;
}

std::vector<std::size_t> ConstraintSystem::members(const ConstraintRef& ref) const {
  switch (ref.kind) {
    case Kind::Triple: {
      const auto& t = triples.at(ref.index).p;
      return {t[0], t[1], t[2]};
    }
    case Kind::Pair: {
      const auto& p = pairs.at(ref.index).p;
      return {p[0], p[1]};
    }
    case Kind::Span: {
      const auto& s = spans.at(ref.index);
      return {s.c, s.a, s.b};
    }
  }
  return {};
}

std::string ConstraintSystem::label(std::size_t i) const {
  if (i < labels.size() && !labels[i].empty()) return labels[i];
  return "p" + std::to_string(i);
}

std::optional<std::size_t> ConstraintSystem::find_label(const std::string& name) const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (label(i) == name) return i;
  }
  return std::nullopt;
}

std::optional<ConstraintRef> ConstraintSystem::find_triple(std::array<std::size_t, 3> pts) const {
  std::sort(pts.begin(), pts.end());
  for (std::size_t i = 0; i < triples.size(); ++i) {
    auto t = triples[i].p;
    std::sort(t.begin(), t.end());
    if (t == pts) return ConstraintRef{Kind::Triple, i};
  }
  return std::nullopt;
}

namespace {

std::array<std::size_t, 3> sorted3(std::array<std::size_t, 3> a) {
  std::sort(a.begin(), a.end());
  return a;
}

std::array<std::size_t, 2> sorted2(std::array<std::size_t, 2> a) {
  if (a[1] < a[0]) std::swap(a[0], a[1]);
  return a;
}

std::tuple<std::size_t, std::size_t, std::size_t> span_key(const Span& s) {
  return {s.c, std::min(s.a, s.b), std::max(s.a, s.b)};
}

}  // namespace

void ConstraintSystem::check() const {
  const std::size_t n = points.size();
  if (!labels.empty() && labels.size() != n) {
    throw Error(ErrorKind::BadIndex, "label count does not match point count");
  }
  auto in_range = [&](std::size_t i, const std::string& where) {
    if (i >= n) throw Error(ErrorKind::BadIndex, where + " references point " + std::to_string(i));
  };
  std::set<std::array<std::size_t, 3>> seen3;
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const auto& t = triples[i].p;
    const std::string where = "T" + std::to_string(i);
    for (auto p : t) in_range(p, where);
    if (t[0] == t[1] || t[0] == t[2] || t[1] == t[2]) throw Error(ErrorKind::BadIndex, where + " repeats a point");
    if (!seen3.insert(sorted3(t)).second) throw Error(ErrorKind::BadIndex, where + " is a duplicate");
  }
  std::set<std::array<std::size_t, 2>> seen2;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& p = pairs[i].p;
    const std::string where = "P" + std::to_string(i);
    for (auto q : p) in_range(q, where);
    if (p[0] == p[1]) throw Error(ErrorKind::BadIndex, where + " repeats a point");
    if (!seen2.insert(sorted2(p)).second) throw Error(ErrorKind::BadIndex, where + " is a duplicate");
  }
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> seen_span;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    const auto& s = spans[i];
    const std::string where = "S" + std::to_string(i);
    in_range(s.c, where);
    in_range(s.a, where);
    in_range(s.b, where);
    if (s.c == s.a || s.c == s.b || s.a == s.b) throw Error(ErrorKind::BadIndex, where + " repeats a point");
    if (!seen_span.insert(span_key(s)).second) throw Error(ErrorKind::BadIndex, where + " is a duplicate");
  }
}

void ConstraintSystem::dedup_constraints() {
  std::set<std::array<std::size_t, 3>> seen3;
  std::erase_if(triples, [&](const Triple& t) { return !seen3.insert(sorted3(t.p)).second; });
  std::set<std::array<std::size_t, 2>> seen2;
  std::erase_if(pairs, [&](const Pair& p) { return !seen2.insert(sorted2(p.p)).second; });
  for (auto& s : spans) {
    if (s.b < s.a) std::swap(s.a, s.b);
  }
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> seen_span;
  std::erase_if(spans, [&](const Span& s) { return !seen_span.insert(span_key(s)).second; });
}

bool is_valid_coloring(const ConstraintSystem& sys, std::span<const Color> coloring) {
  if (coloring.size() != sys.size()) return false;
  for (Color c : coloring) {
    if (c == Color::Unset) return false;
  }
  auto red = [&](std::size_t i) { return coloring[i] == Color::Red; };
  for (const auto& t : sys.triples) {
    if (red(t.p[0]) + red(t.p[1]) + red(t.p[2]) != 1) return false;
  }
  for (const auto& p : sys.pairs) {
    if (red(p.p[0]) && red(p.p[1])) return false;
  }
  for (const auto& s : sys.spans) {
    if (!red(s.a) && !red(s.b) && red(s.c)) return false;
  }
  return true;
}

bool falsified(const ConstraintSystem& sys, const ConstraintRef& ref, std::span<const Color> partial) {
  auto is = [&](std::size_t i, Color c) { return partial[i] == c; };
  switch (ref.kind) {
    case Kind::Triple: {
      const auto& t = sys.triples[ref.index].p;
      int reds = 0, greens = 0;
      for (auto p : t) {
        reds += is(p, Color::Red);
        greens += is(p, Color::Green);
      }
      return reds >= 2 || greens == 3;
    }
    case Kind::Pair: {
      const auto& p = sys.pairs[ref.index].p;
      return is(p[0], Color::Red) && is(p[1], Color::Red);
    }
    case Kind::Span: {
      const auto& s = sys.spans[ref.index];
      return is(s.a, Color::Green) && is(s.b, Color::Green) && is(s.c, Color::Red);
    }
  }
  return false;
}

void consequences(const ConstraintSystem& sys, const ConstraintRef& ref, std::span<const Color> partial,
                  std::vector<Inference>& out) {
  auto is = [&](std::size_t i, Color c) { return partial[i] == c; };
  auto unset = [&](std::size_t i) { return partial[i] == Color::Unset; };
  auto emit1 = [&](Literal lit, Literal prem) { out.push_back({lit, {prem, Literal{}}, 1}); };
  auto emit2 = [&](Literal lit, Literal p0, Literal p1) { out.push_back({lit, {p0, p1}, 2}); };

  switch (ref.kind) {
    case Kind::Triple: {
      const auto& t = sys.triples[ref.index].p;
      for (int i = 0; i < 3; ++i) {
        if (!is(t[i], Color::Red)) continue;
        // one red: the other two are green
        for (int j = 0; j < 3; ++j) {
          if (j != i && unset(t[j])) emit1({t[j], false}, {t[i], true});
        }
        return;
      }
      for (int k = 0; k < 3; ++k) {
        const auto i = t[(k + 1) % 3], j = t[(k + 2) % 3];
        // two green: the third is red
        if (unset(t[k]) && is(i, Color::Green) && is(j, Color::Green)) {
          emit2({t[k], true}, {std::min(i, j), false}, {std::max(i, j), false});
        }
      }
      return;
    }
    case Kind::Pair: {
      const auto& p = sys.pairs[ref.index].p;
      if (is(p[0], Color::Red) && unset(p[1])) emit1({p[1], false}, {p[0], true});
      if (is(p[1], Color::Red) && unset(p[0])) emit1({p[0], false}, {p[1], true});
      return;
    }
    case Kind::Span: {
      const auto& s = sys.spans[ref.index];
      if (unset(s.c) && is(s.a, Color::Green) && is(s.b, Color::Green)) {
        emit2({s.c, false}, {s.a, false}, {s.b, false});
      }
      if (is(s.c, Color::Red)) {
        if (is(s.a, Color::Green) && unset(s.b)) emit2({s.b, true}, {s.c, true}, {s.a, false});
        if (is(s.b, Color::Green) && unset(s.a)) emit2({s.a, true}, {s.c, true}, {s.b, false});
      }
      return;
    }
  }
}

namespace {

// Assignment bookkeeping for backjumping: decision level of every assigned
// point and the premise points of the inference that assigned it.
struct Reasons {
  std::vector<std::uint32_t> level;
  std::vector<std::array<std::size_t, 2>> premise;
  std::vector<std::uint8_t> premise_count;
  std::uint32_t current = 0;

  explicit Reasons(std::size_t n) : level(n, 0), premise(n), premise_count(n, 0) {}
};

// Constraint occurrence lists over a global numbering: triples, pairs, spans.
class Engine {
 public:
  explicit Engine(const ConstraintSystem& sys) : sys_(sys), occ_(sys.size()), queued_(sys.constraint_count()) {
    sys.check();
    for (std::size_t g = 0; g < sys.constraint_count(); ++g) {
      for (auto p : sys.members(ref(g))) occ_[p].push_back(g);
    }
  }

  ConstraintRef ref(std::size_t g) const {
    const std::size_t t = sys_.triples.size(), p = sys_.pairs.size();
    if (g < t) return {Kind::Triple, g};
    if (g < t + p) return {Kind::Pair, g - t};
    return {Kind::Span, g - t - p};
  }

  std::size_t constraint_count() const { return sys_.constraint_count(); }
  const std::vector<std::size_t>& occurrences(std::size_t point) const { return occ_[point]; }

  // FIFO worklist seeded with `seeds` in order; a constraint is revisited
  // whenever one of its points is assigned.
  std::optional<ConstraintRef> run(Coloring& coloring, const std::vector<std::size_t>& seeds,
                                   std::vector<std::size_t>* trail, std::vector<TraceEntry>* trace,
                                   Reasons* reasons = nullptr) {
    std::deque<std::size_t> queue;
    std::fill(queued_.begin(), queued_.end(), false);
    for (auto g : seeds) {
      if (!queued_[g]) {
        queued_[g] = true;
        queue.push_back(g);
      }
    }
    std::vector<Inference> found;
    while (!queue.empty()) {
      const std::size_t g = queue.front();
      queue.pop_front();
      queued_[g] = false;
      const ConstraintRef r = ref(g);
      if (falsified(sys_, r, coloring)) return r;
      found.clear();
      consequences(sys_, r, coloring, found);
      for (const auto& inf : found) {
        const std::size_t p = inf.lit.point;
        if (coloring[p] != Color::Unset) {
          if (coloring[p] != inf.lit.color()) return r;
          continue;
        }
        coloring[p] = inf.lit.color();
        if (trail) trail->push_back(p);
        if (trace) trace->push_back({inf, r});
        if (reasons) {
          reasons->level[p] = reasons->current;
          reasons->premise_count[p] = inf.premise_count;
          for (std::uint8_t k = 0; k < inf.premise_count; ++k) reasons->premise[p][k] = inf.premises[k].point;
        }
        for (auto h : occ_[p]) {
          if (!queued_[h]) {
            queued_[h] = true;
            queue.push_back(h);
          }
        }
      }
    }
    return std::nullopt;
  }

  std::vector<std::size_t> all() const {
    std::vector<std::size_t> g(constraint_count());
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = i;
    return g;
  }

  const ConstraintSystem& system() const { return sys_; }

 private:
  const ConstraintSystem& sys_;
  std::vector<std::vector<std::size_t>> occ_;
  std::vector<bool> queued_;
};

Coloring sized(const ConstraintSystem& sys, const Coloring& in) {
  Coloring c = in;
  c.resize(sys.size(), Color::Unset);
  return c;
}

// Backtracking with conflict-directed backjumping. Every failed subtree
// reports the set of decision levels its refutation depends on; a decision
// outside that set is not retried with the other colour.
class Search {
 public:
  Search(const ConstraintSystem& sys, SolveStats* stats)
      : engine_(sys), stats_(stats), reasons_(sys.size()), decision_of_level_(1, sys.size()) {}

  bool run(Coloring& coloring) {
    if (engine_.run(coloring, engine_.all(), &trail_, nullptr, &reasons_)) {
      count_conflict();
      return false;
    }
    std::vector<std::uint32_t> ignored;
    return descend(coloring, 0, ignored);
  }

 private:
  using Levels = std::vector<std::uint32_t>;  // sorted, unique, no level 0

  bool descend(Coloring& coloring, std::size_t from, Levels& conflict_levels) {
    std::size_t point = from;
    while (point < coloring.size() && coloring[point] != Color::Unset) ++point;
    if (point == coloring.size()) return true;

    const std::uint32_t level = static_cast<std::uint32_t>(decision_of_level_.size());
    decision_of_level_.push_back(point);
    Levels merged;
    for (Color choice : {Color::Red, Color::Green}) {
      if (stats_) ++stats_->nodes;
      const std::size_t mark = trail_.size();
      coloring[point] = choice;
      trail_.push_back(point);
      reasons_.current = level;
      reasons_.level[point] = level;
      reasons_.premise_count[point] = 0;

      Levels branch;
      bool sat = false;
      if (auto conflict = engine_.run(coloring, engine_.occurrences(point), &trail_, nullptr, &reasons_)) {
        count_conflict();
        branch = analyze(coloring, *conflict);
      } else {
        sat = descend(coloring, point + 1, branch);
      }
      if (sat) return true;
      while (trail_.size() > mark) {
        coloring[trail_.back()] = Color::Unset;
        trail_.pop_back();
      }
      if (!std::binary_search(branch.begin(), branch.end(), level)) {
        // The refutation does not use this decision: the other colour
        // fails the same way.
        decision_of_level_.pop_back();
        conflict_levels = std::move(branch);
        return false;
      }
      merged.insert(merged.end(), branch.begin(), branch.end());
    }
    decision_of_level_.pop_back();
    std::sort(merged.begin(), merged.end());
    merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
    std::erase(merged, level);
    conflict_levels = std::move(merged);
    return false;
  }

  // Decision levels reachable from the members of a falsified constraint
  // through the premises of their inferences.
  Levels analyze(const Coloring& coloring, const ConstraintRef& conflict) {
    Levels out;
    seen_.assign(coloring.size(), false);
    std::vector<std::size_t> stack;
    for (auto p : engine_.system().members(conflict)) {
      if (coloring[p] != Color::Unset) stack.push_back(p);
    }
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      if (seen_[p]) continue;
      seen_[p] = true;
      const std::uint32_t lv = reasons_.level[p];
      if (lv == 0) continue;
      if (reasons_.premise_count[p] == 0) {
        out.push_back(lv);
        continue;
      }
      for (std::uint8_t k = 0; k < reasons_.premise_count[p]; ++k) stack.push_back(reasons_.premise[p][k]);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  void count_conflict() {
    if (stats_) ++stats_->conflicts;
  }

  Engine engine_;
  SolveStats* stats_;
  Reasons reasons_;
  std::vector<std::size_t> trail_;
  std::vector<std::size_t> decision_of_level_;
  std::vector<bool> seen_;
};

}  // namespace

Propagation propagate(const ConstraintSystem& sys, Coloring& coloring, std::vector<TraceEntry>* trace) {
  coloring.resize(sys.size(), Color::Unset);
  Engine engine(sys);
  return {engine.run(coloring, engine.all(), nullptr, trace)};
}

Verdict solve(const ConstraintSystem& sys, const Coloring& assumptions, SolveStats* stats) {
  Coloring coloring = sized(sys, assumptions);
  Search search(sys, stats);
  if (search.run(coloring)) return Valid{std::move(coloring)};
  return Uncolorable{};
}

std::uint64_t count_colorings(const ConstraintSystem& sys) {
  const std::size_t n = sys.size();
  if (n > kMaxEnumerationPoints) {
    throw Error(ErrorKind::TooLarge, std::to_string(n) + " points exceed the enumeration limit of " +
                                         std::to_string(kMaxEnumerationPoints));
  }
  sys.check();
  auto bit = [](std::size_t i) { return std::uint32_t{1} << i; };
  std::vector<std::uint32_t> triple_masks, pair_masks;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> span_masks;  // (witnesses, forced)
  for (const auto& t : sys.triples) triple_masks.push_back(bit(t.p[0]) | bit(t.p[1]) | bit(t.p[2]));
  for (const auto& p : sys.pairs) pair_masks.push_back(bit(p.p[0]) | bit(p.p[1]));
  for (const auto& s : sys.spans) span_masks.emplace_back(bit(s.a) | bit(s.b), bit(s.c));

  std::uint64_t count = 0;
  const std::uint64_t total = std::uint64_t{1} << n;
  for (std::uint64_t m = 0; m < total; ++m) {
    const auto red = static_cast<std::uint32_t>(m);
    bool ok = true;
    for (auto t : triple_masks) {
      if (std::popcount(red & t) != 1) {
        ok = false;
        break;
      }
    }
    for (std::size_t i = 0; ok && i < pair_masks.size(); ++i) {
      if (std::popcount(red & pair_masks[i]) > 1) ok = false;
    }
    for (std::size_t i = 0; ok && i < span_masks.size(); ++i) {
      if ((red & span_masks[i].first) == 0 && (red & span_masks[i].second) != 0) ok = false;
    }
    count += ok;
  }
  return count;
}

CnfDoc to_cnf(const ConstraintSystem& sys) {
  CnfDoc doc;
  doc.variables = sys.size();
  auto var = [](std::size_t i) { return static_cast<int>(i) + 1; };
  for (const auto& t : sys.triples) {
    const int a = var(t.p[0]), b = var(t.p[1]), c = var(t.p[2]);
    doc.clauses.push_back({a, b, c});
    doc.clauses.push_back({-a, -b});
    doc.clauses.push_back({-a, -c});
    doc.clauses.push_back({-b, -c});
  }
  for (const auto& p : sys.pairs) doc.clauses.push_back({-var(p.p[0]), -var(p.p[1])});
  for (const auto& s : sys.spans) doc.clauses.push_back({var(s.a), var(s.b), -var(s.c)});
  if (!sys.labels.empty()) {
    for (std::size_t i = 0; i < sys.size(); ++i) doc.comments[var(i)] = sys.label(i);
  }
  return doc;
}

}  // namespace ks::csp
