// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <regex>
#include <sstream>
#include <string>

#include "kscolor/certificate.hpp"
#include "kscolor/construct.hpp"
#include "kscolor/descent.hpp"
#include "kscolor/formats.hpp"
#include "support.hpp"

using namespace ks;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string slurp(const std::string& name) {
  std::ifstream in(std::string(KSCOLOR_TEST_DATA) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const construct::Construction& construction() {
  static const construct::Construction c = construct::build_construction();
  return c;
}

Outcome geometric_validity() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto sys = construct::build_system(30);
  const auto bad = construct::validate_geometry(sys, kDefaultTolerances);
  const double dt = seconds_since(t0);
  o.require(bad.empty(), bad.empty() ? "" : bad.front().what);
  o.require(dt < 1.0, "took " + std::to_string(dt) + " s");
  o.detail = o.ok ? std::to_string(sys.size()) + " points, " + std::to_string(sys.constraint_count()) +
                        " constraints, " + std::to_string(dt) + " s"
                  : o.detail;
  return o;
}

Outcome theorem() {
  Outcome o;
  const auto sys = construct::build_system(30);
  const auto t0 = Clock::now();
  csp::SolveStats stats;
  const auto v = csp::solve(sys, {}, &stats);
  const double dt = seconds_since(t0);
  o.require(std::holds_alternative<csp::Uncolorable>(v), "solver found a colouring");
  o.require(dt < 10.0, "took " + std::to_string(dt) + " s");
  if (o.ok) o.detail = "UNCOLORABLE, " + std::to_string(stats.nodes) + " nodes, " + std::to_string(dt) + " s";
  return o;
}

Outcome case_split_proof() {
  Outcome o;
  const auto& c = construction();
  const auto& sys = c.system;
  const auto r = csp::prove_paper_style(sys, c.corners, c.circuit);
  if (!std::holds_alternative<csp::Certificate>(r)) {
    o.require(false, std::get<csp::NotDerivable>(r).reason);
    return o;
  }
  const auto& cert = std::get<csp::Certificate>(r);
  const auto n = sys.find_label("N"), cc = sys.find_label("C"), f = sys.find_label("F");
  o.require(n && cc && f, "corner labels missing");
  if (!o.ok) return o;
  o.require(cert.split && cert.split == sys.find_triple({*n, *cc, *f}), "root split is not TRIPLE(N, C, F)");
  o.require(cert.branches.size() == 3, "expected three branches");
  std::size_t probes = 0;
  for (const auto& b : cert.branches) {
    o.require(b.assumed.red, "branch assumes a green corner");
    std::size_t pos = std::find(c.circuit.begin(), c.circuit.end(), b.assumed.point) - c.circuit.begin();
    for (const auto& s : b.body.steps) {
      const auto* p = std::get_if<csp::Probe>(&s);
      if (!p) continue;
      ++probes;
      o.require(!p->assumed.red, "probe assumes red");
      // Probes follow the circuit forward from the branch corner.
      std::size_t k = 1;
      while (k < c.circuit.size() && c.circuit[(pos + k) % c.circuit.size()] != p->assumed.point) ++k;
      o.require(k < c.circuit.size(), "probe on a point outside the circuit, or out of order");
      pos = (pos + k) % c.circuit.size();
    }
  }
  o.require(probes > 0, "no probes");
  const auto chk = csp::check_certificate(sys, cert);
  o.require(chk.ok, "checker: " + chk.where + ": " + chk.reason);
  if (o.ok) o.detail = "split TRIPLE(N,C,F), " + std::to_string(probes) + " probes, checker ok";
  return o;
}

Outcome descent_lemma() {
  Outcome o;
  const Frame f = Frame::standard();
  const auto p = descent::plan(f, {60, 0}, {30, 180});
  const auto bad = descent::validate(p);
  o.require(bad.empty(), bad.empty() ? "" : bad.front().what);
  const double err = deg_to_rad(proj_angle(p.points.back(), latlon_to_vec(f, {30, 180})));
  o.require(err < 1e-9, "endpoint error " + std::to_string(err));
  o.require(p.steps.size() == 7, "step count " + std::to_string(p.steps.size()));
  if (!o.ok) return o;
  const double sec36 = 1.0 / std::cos(deg_to_rad(36.0));
  const double gamma = std::acos(std::sqrt(std::pow(sec36, 5) / 3.0));
  for (int i = 0; i < 5; ++i) o.require(std::abs(p.steps[i].beta_deg - 36.0) < 1e-12, "equal step is not 36 deg");
  o.require(std::abs(deg_to_rad(p.steps[5].beta_deg) - gamma) < 1e-9, "zigzag +gamma");
  o.require(std::abs(deg_to_rad(p.steps[6].beta_deg) + gamma) < 1e-9, "zigzag -gamma");
  o.require(std::abs(rad_to_deg(gamma) - 11.269) < 1e-3, "gamma oracle");
  // Radius law, recomputed from the vectors alone.
  for (const auto& s : p.steps) {
    const double lhs = std::tan(deg_to_rad(colatitude_deg(f, s.to)));
    const double rhs = std::tan(deg_to_rad(colatitude_deg(f, s.from))) / std::cos(deg_to_rad(s.beta_deg));
    o.require(std::abs(lhs / rhs - 1.0) < 1e-9, "radius law");
  }
  if (o.ok) o.detail = "7 steps, gamma = " + std::to_string(rad_to_deg(gamma)) + " deg, error " + std::to_string(err);
  return o;
}

Outcome solver_oracle() {
  Outcome o;
  std::mt19937_64 rng(20240611);
  const auto t0 = Clock::now();
  int valid = 0;
  const int rounds = 150;
  for (int i = 0; i < rounds; ++i) {
    const auto sys = testing::random_geometric_system(rng, 6 + static_cast<std::size_t>(i % 11));
    const auto count = csp::count_colorings(sys);
    const auto v = csp::solve(sys);
    const bool is_valid = std::holds_alternative<csp::Valid>(v);
    o.require((count > 0) == is_valid, "verdict disagrees with enumeration at round " + std::to_string(i));
    if (is_valid) {
      ++valid;
      o.require(csp::is_valid_coloring(sys, std::get<csp::Valid>(v).coloring), "invalid colouring returned");
    }
  }
  const double dt = seconds_since(t0);
  o.require(dt < 60.0, "took " + std::to_string(dt) + " s");
  if (o.ok) {
    o.detail = std::to_string(rounds) + " systems, " + std::to_string(valid) + " colourable, " + std::to_string(dt) + " s";
  }
  return o;
}

Outcome micro_counts() {
  Outcome o;
  auto blank = [](std::size_t n) {
    csp::ConstraintSystem s;
    s.points.assign(n, canonicalize(UnitVec::checked({0, 0, 1})));
    return s;
  };
  auto t = blank(3);
  t.triples.push_back({{0, 1, 2}});
  auto p = blank(2);
  p.pairs.push_back({{0, 1}});
  auto ts = t;
  ts.spans.push_back({2, 0, 1});
  const auto a = csp::count_colorings(t), b = csp::count_colorings(p), c = csp::count_colorings(ts);
  o.require(a == 3 && b == 3 && c == 2, "counts " + std::to_string(a) + "/" + std::to_string(b) + "/" + std::to_string(c));
  if (o.ok) o.detail = "3 / 3 / 2";
  return o;
}

Outcome gadget_logic() {
  Outcome o;
  for (std::size_t i = 0; i < construction().gadgets.size(); ++i) {
    const auto gs = construct::gadget_system(construction().gadgets[i]);
    csp::Coloring c(gs.system.size(), csp::Color::Unset);
    c[gs.pole] = csp::Color::Red;
    c[gs.target] = csp::Color::Green;
    csp::Coloring prop = c;
    const std::string tag = "gadget " + std::to_string(i) + ": ";
    o.require(csp::propagate(gs.system, prop).conflict.has_value(), tag + "propagation does not conflict");
    o.require(std::holds_alternative<csp::Uncolorable>(csp::solve(gs.system, c)), tag + "u=R, s=G colourable");
    c[gs.target] = csp::Color::Unset;
    const auto v = csp::solve(gs.system, c);
    o.require(std::holds_alternative<csp::Valid>(v), tag + "u=R uncolourable");
    if (const auto* w = std::get_if<csp::Valid>(&v)) {
      o.require(w->coloring[gs.target] == csp::Color::Red, tag + "target not red");
      o.require(csp::is_valid_coloring(gs.system, w->coloring), tag + "invalid colouring");
    }
  }
  if (o.ok) o.detail = std::to_string(construction().gadgets.size()) + " gadgets";
  return o;
}

Outcome cnf_faithfulness() {
  Outcome o;
  std::vector<csp::ConstraintSystem> corpus;
  for (const char* name : {"basis.json", "basis_diagonal.json", "triple_span.json", "unnormalized.json"}) {
    corpus.push_back(formats::materialize(formats::parse_system(slurp(name))));
  }
  {
    formats::SystemDoc d = formats::parse_vector_list(slurp("ten_points.txt"));
    d.derive = {true, true, true};
    corpus.push_back(formats::materialize(d));
  }
  std::mt19937_64 rng(8);
  for (int i = 0; i < 40; ++i) corpus.push_back(testing::random_geometric_system(rng, 12));
  for (const auto& sys : corpus) {
    if (sys.size() > 12) continue;
    const auto models = testing::cnf_models(csp::to_cnf(sys));
    std::vector<std::uint32_t> valid;
    for (std::uint32_t m = 0; m < (1u << sys.size()); ++m) {
      if (csp::is_valid_coloring(sys, testing::coloring_from_mask(sys.size(), m))) valid.push_back(m);
    }
    o.require(models == valid, "model set differs from VALID colourings");
    o.require(formats::write_dimacs(csp::to_cnf(sys)) == formats::write_dimacs(csp::to_cnf(sys)), "unstable DIMACS");
  }
  csp::ConstraintSystem bare = corpus[0];
  bare.labels.clear();
  o.require(formats::write_dimacs(csp::to_cnf(bare)) == "p cnf 3 4\n1 2 3 0\n-1 -2 0\n-1 -3 0\n-2 -3 0\n",
            "DIMACS bytes for a single triple");
  if (o.ok) o.detail = std::to_string(corpus.size()) + " systems";
  return o;
}

Outcome round_trips() {
  Outcome o;
  const auto& c = construction();
  formats::SystemDoc doc;
  doc.system = c.system;
  doc.circuit = c.circuit;
  doc.corners = c.corners;
  o.require(formats::parse_system(formats::write_system(doc)) == doc, "construction document");
  for (const char* name : {"basis.json", "basis_diagonal.json", "triple_span.json", "unnormalized.json"}) {
    const auto d = formats::parse_system(slurp(name));
    o.require(formats::parse_system(formats::write_system(d)) == d, std::string("document ") + name);
  }
  const auto r = csp::prove_paper_style(c.system, c.corners, c.circuit);
  if (const auto* cert = std::get_if<csp::Certificate>(&r)) {
    o.require(formats::parse_certificate(formats::write_certificate(*cert)) == *cert, "certificate");
  } else {
    o.require(false, "no certificate");
  }

  const Frame tilted = Frame::from_pole_meridian(UnitVec::normalized({1, 1, 1}), UnitVec::checked({0, 0, 1}));
  formats::SvgLayers layers;
  layers.latitude_circles_deg = {30, 60};
  for (std::size_t i = 0; i < c.circuit.size(); ++i) {
    layers.points.push_back({c.system.label(c.circuit[i]), UnitVec::checked(c.system.points[c.circuit[i]].vec())});
  }
  const std::string svg = formats::render_svg(tilted, layers);
  const std::regex re(R"re(class="point" data-label="[^"]*" cx="([^"]+)" cy="([^"]+)")re");
  std::size_t k = 0;
  double worst = 0.0;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re); it != std::sregex_iterator(); ++it, ++k) {
    if (k >= layers.points.size()) break;
    const PlanePoint want = gnomonic(tilted, northern(tilted, layers.points[k].v));
    worst = std::max({worst, std::abs(std::stod((*it)[1]) - want.u), std::abs(std::stod((*it)[2]) - want.v)});
  }
  o.require(k == layers.points.size(), "SVG point count");
  o.require(worst < 1e-9, "SVG coordinate error " + std::to_string(worst));
  if (o.ok) o.detail = "documents, certificate and SVG (max error " + std::to_string(worst) + ")";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"geometric validity", geometric_validity},
      {"machine refutation", theorem},
      {"case-split certificate", case_split_proof},
      {"descent lemma instance", descent_lemma},
      {"solver/oracle equivalence", solver_oracle},
      {"micro-instance counts", micro_counts},
      {"gadget logic", gadget_logic},
      {"CNF faithfulness", cnf_faithfulness},
      {"format round trips", round_trips},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %zu %s: %s\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    failed += !o.ok;
  }
  return failed == 0 ? 0 : 1;
}
