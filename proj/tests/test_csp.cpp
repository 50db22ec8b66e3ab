#include <doctest.h>

#include <algorithm>
#include <random>

#include "kscolor/csp.hpp"
#include "kscolor/error.hpp"
#include "support.hpp"

using namespace ks;
using namespace ks::csp;

namespace {

ConstraintSystem blank(std::size_t n) {
  ConstraintSystem sys;
  for (std::size_t i = 0; i < n; ++i) sys.points.push_back(canonicalize(UnitVec::checked({0, 0, 1})));
  return sys;
}

ConstraintSystem single_triple() {
  ConstraintSystem s = blank(3);
  s.triples.push_back({{0, 1, 2}});
  return s;
}

ConstraintSystem triple_and_span() {
  ConstraintSystem s = single_triple();
  s.spans.push_back({2, 0, 1});
  return s;
}

bool is_valid(const Verdict& v) { return std::holds_alternative<Valid>(v); }

// Enumeration straight from the colouring rules, independent of count_colorings.
std::uint64_t naive_count(const ConstraintSystem& sys) {
  std::uint64_t n = 0;
  for (std::uint32_t m = 0; m < (1u << sys.size()); ++m) {
    auto red = [&](std::size_t i) { return ((m >> i) & 1u) != 0; };
    bool ok = true;
    for (const auto& t : sys.triples) ok = ok && (red(t.p[0]) + red(t.p[1]) + red(t.p[2]) == 1);
    for (const auto& p : sys.pairs) ok = ok && !(red(p.p[0]) && red(p.p[1]));
    for (const auto& s : sys.spans) ok = ok && !(!red(s.a) && !red(s.b) && red(s.c));
    n += ok;
  }
  return n;
}

}  // namespace

TEST_CASE("constraint refs") {
  CHECK(to_string(ConstraintRef{Kind::Span, 12}) == "S12");
  CHECK(parse_constraint_ref("T0") == ConstraintRef{Kind::Triple, 0});
  CHECK(parse_constraint_ref("P7") == ConstraintRef{Kind::Pair, 7});
  CHECK_FALSE(parse_constraint_ref("X1"));
  CHECK_FALSE(parse_constraint_ref("T"));
  CHECK_FALSE(parse_constraint_ref("T1a"));
}

TEST_CASE("check and dedup") {
  ConstraintSystem s = blank(3);
  s.triples.push_back({{0, 1, 3}});
  CHECK_THROWS_AS(s.check(), Error);
  s = blank(3);
  s.pairs.push_back({{1, 1}});
  CHECK_THROWS_AS(s.check(), Error);

  s = blank(4);
  s.triples = {{{2, 1, 0}}, {{0, 1, 2}}};
  s.spans = {{3, 1, 0}, {3, 0, 1}};
  s.dedup_constraints();
  CHECK(s.triples.size() == 1);
  REQUIRE(s.spans.size() == 1);
  CHECK(s.spans[0].a == 0);
  CHECK(s.spans[0].b == 1);
  const ConstraintSystem once = s;
  s.dedup_constraints();
  CHECK(s.triples == once.triples);
  CHECK(s.spans == once.spans);
}

TEST_CASE("micro instances: exact counts") {
  CHECK(count_colorings(single_triple()) == 3);
  ConstraintSystem pair = blank(2);
  pair.pairs.push_back({{0, 1}});
  CHECK(count_colorings(pair) == 3);
  CHECK(count_colorings(triple_and_span()) == 2);
  CHECK(count_colorings(blank(0)) == 1);
  CHECK_THROWS_AS(count_colorings(blank(kMaxEnumerationPoints + 1)), Error);
}

TEST_CASE("solve: micro instances") {
  const Verdict v = solve(single_triple());
  REQUIRE(is_valid(v));
  CHECK(std::get<Valid>(v).coloring == Coloring{Color::Red, Color::Green, Color::Green});

  const Verdict w = solve(triple_and_span());
  REQUIRE(is_valid(w));
  CHECK(is_valid_coloring(triple_and_span(), std::get<Valid>(w).coloring));
  CHECK(std::get<Valid>(w).coloring[2] == Color::Green);

  ConstraintSystem two = blank(3);
  two.triples.push_back({{0, 1, 2}});
  Coloring assume(3, Color::Unset);
  assume[0] = Color::Green;
  assume[1] = Color::Green;
  assume[2] = Color::Green;
  CHECK_FALSE(is_valid(solve(two, assume)));
}

TEST_CASE("propagate: rule examples") {
  SUBCASE("one red in a triple") {
    ConstraintSystem s = single_triple();
    Coloring c{Color::Red, Color::Unset, Color::Unset};
    std::vector<TraceEntry> trace;
    CHECK_FALSE(propagate(s, c, &trace).conflict);
    CHECK(c == Coloring{Color::Red, Color::Green, Color::Green});
    CHECK(trace.size() == 2);
  }
  SUBCASE("two greens in a triple") {
    ConstraintSystem s = single_triple();
    Coloring c{Color::Green, Color::Unset, Color::Green};
    CHECK_FALSE(propagate(s, c).conflict);
    CHECK(c[1] == Color::Red);
  }
  SUBCASE("span conflict") {
    ConstraintSystem s = blank(3);
    s.spans.push_back({2, 0, 1});
    Coloring c{Color::Green, Color::Green, Color::Red};
    const Propagation p = propagate(s, c);
    REQUIRE(p.conflict);
    CHECK(*p.conflict == ConstraintRef{Kind::Span, 0});
  }
  SUBCASE("span contrapositive") {
    ConstraintSystem s = blank(3);
    s.spans.push_back({2, 0, 1});
    Coloring c{Color::Unset, Color::Green, Color::Red};
    CHECK_FALSE(propagate(s, c).conflict);
    CHECK(c[0] == Color::Red);
  }
  SUBCASE("pair") {
    ConstraintSystem s = blank(2);
    s.pairs.push_back({{0, 1}});
    Coloring c{Color::Unset, Color::Red};
    CHECK_FALSE(propagate(s, c).conflict);
    CHECK(c[0] == Color::Green);
  }
  SUBCASE("nothing forced") {
    ConstraintSystem s = triple_and_span();
    Coloring c(3, Color::Unset);
    CHECK_FALSE(propagate(s, c).conflict);
    CHECK(c == Coloring(3, Color::Unset));
  }
}

TEST_CASE("propagate: monotone, idempotent, sound") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> col(0, 5);
  for (int round = 0; round < 300; ++round) {
    const ConstraintSystem sys = testing::random_abstract_system(rng, 10, 4, 3, 6);
    Coloring start(sys.size());
    for (auto& c : start) {
      const int k = col(rng);
      c = k == 0 ? Color::Red : k == 1 ? Color::Green : Color::Unset;
    }
    Coloring once = start;
    const Propagation p1 = propagate(sys, once);
    for (std::size_t i = 0; i < sys.size(); ++i) {
      if (start[i] != Color::Unset) CHECK(once[i] == start[i]);
    }
    if (p1.conflict) {
      // Every completion of the start assignment is invalid.
      CHECK_FALSE(is_valid(solve(sys, start)));
      continue;
    }
    Coloring twice = once;
    CHECK_FALSE(propagate(sys, twice).conflict);
    CHECK(twice == once);
    // Forced literals hold in every valid completion.
    for (std::uint32_t m = 0; m < (1u << sys.size()); ++m) {
      const Coloring full = testing::coloring_from_mask(sys.size(), m);
      bool extends = true;
      for (std::size_t i = 0; i < sys.size(); ++i) extends = extends && (start[i] == Color::Unset || start[i] == full[i]);
      if (!extends || !is_valid_coloring(sys, full)) continue;
      for (std::size_t i = 0; i < sys.size(); ++i) {
        if (once[i] != Color::Unset) CHECK(full[i] == once[i]);
      }
    }
  }
}

TEST_CASE("solver agrees with enumeration on random systems") {
  std::mt19937_64 rng(4242);
  for (int round = 0; round < 400; ++round) {
    const ConstraintSystem sys = round % 2 ? testing::random_abstract_system(rng, 12, 6, 3, 10)
                                           : testing::random_geometric_system(rng, 14);
    const std::uint64_t count = count_colorings(sys);
    CHECK(count == naive_count(sys));
    const Verdict v = solve(sys);
    CHECK((count > 0) == is_valid(v));
    if (is_valid(v)) CHECK(is_valid_coloring(sys, std::get<Valid>(v).coloring));
  }
}

TEST_CASE("to_cnf: clause shapes") {
  const CnfDoc t = to_cnf(single_triple());
  CHECK(t.variables == 3);
  CHECK(t.clauses == std::vector<std::vector<int>>{{1, 2, 3}, {-1, -2}, {-1, -3}, {-2, -3}});
  ConstraintSystem s = blank(3);
  s.spans.push_back({2, 0, 1});
  CHECK(to_cnf(s).clauses == std::vector<std::vector<int>>{{1, 2, -3}});
  ConstraintSystem p = blank(2);
  p.pairs.push_back({{0, 1}});
  CHECK(to_cnf(p).clauses == std::vector<std::vector<int>>{{-1, -2}});
}

TEST_CASE("to_cnf: models are exactly the valid colourings") {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 100; ++round) {
    const ConstraintSystem sys = round % 2 ? testing::random_abstract_system(rng, 10, 4, 2, 8)
                                           : testing::random_geometric_system(rng, 12);
    const auto models = testing::cnf_models(to_cnf(sys));
    std::vector<std::uint32_t> valid;
    for (std::uint32_t m = 0; m < (1u << sys.size()); ++m) {
      if (is_valid_coloring(sys, testing::coloring_from_mask(sys.size(), m))) valid.push_back(m);
    }
    CHECK(models == valid);
  }
}
