#include "kscolor/certificate.hpp"

#include <algorithm>

namespace ks::csp {

namespace {

void append_trace(std::vector<Step>& steps, const std::vector<TraceEntry>& trace) {
  for (const auto& e : trace) {
    const auto prem = e.inference.premise_span();
    steps.push_back(Propagate{e.inference.lit, e.by, {prem.begin(), prem.end()}});
  }
}

std::string lit_text(const ConstraintSystem& sys, const Literal& l) {
  return sys.label(l.point) + (l.red ? "=red" : "=green");
}

}  // namespace

std::variant<Certificate, NotDerivable> prove_paper_style(const ConstraintSystem& sys,
                                                          const std::array<std::size_t, 3>& corners,
                                                          const std::vector<std::size_t>& circuit) {
  for (auto c : corners) {
    if (c >= sys.size()) return NotDerivable{"corner index out of range"};
  }
  const auto split = sys.find_triple(corners);
  if (!split) return NotDerivable{"the system has no TRIPLE over the corner points"};
  sys.check();

  Certificate cert;
  cert.split = split;
  for (std::size_t corner : sys.triples[split->index].p) {
    Branch branch{{corner, true}, {}};
    Coloring coloring(sys.size(), Color::Unset);
    coloring[corner] = Color::Red;

    std::vector<TraceEntry> trace;
    auto result = propagate(sys, coloring, &trace);
    append_trace(branch.body.steps, trace);

    const auto at = std::find(circuit.begin(), circuit.end(), corner);
    if (!result.conflict && at == circuit.end()) {
      return NotDerivable{"corner " + sys.label(corner) + " is not on the circuit"};
    }
    const std::size_t start = static_cast<std::size_t>(at - circuit.begin());
    for (std::size_t k = 1; !result.conflict && k <= circuit.size(); ++k) {
      const std::size_t point = circuit[(start + k) % circuit.size()];
      if (coloring[point] == Color::Red) continue;
      if (coloring[point] == Color::Green) {
        return NotDerivable{"circuit point " + sys.label(point) + " is already forced green"};
      }
      Coloring probe = coloring;
      probe[point] = Color::Green;
      std::vector<TraceEntry> probe_trace;
      const auto refuted = propagate(sys, probe, &probe_trace);
      if (!refuted.conflict) {
        return NotDerivable{"assuming " + sys.label(point) + " green does not propagate to a conflict"};
      }
      Probe step{{point, false}, {}};
      append_trace(step.body.steps, probe_trace);
      step.body.conflict = *refuted.conflict;
      branch.body.steps.emplace_back(std::move(step));

      coloring[point] = Color::Red;
      trace.clear();
      result = propagate(sys, coloring, &trace);
      append_trace(branch.body.steps, trace);
    }
    if (!result.conflict) {
      return NotDerivable{"branch " + sys.label(corner) + " went round the circuit without a conflict"};
    }
    branch.body.conflict = *result.conflict;
    cert.branches.push_back(std::move(branch));
  }
  return cert;
}

namespace {

class Replay {
 public:
  explicit Replay(const ConstraintSystem& sys) : sys_(sys) {}

  CheckResult block(Coloring state, const Block& b, const std::string& where) {
    for (std::size_t i = 0; i < b.steps.size(); ++i) {
      const std::string here = where + " / step " + std::to_string(i);
      CheckResult r = std::visit([&](const auto& s) { return step(state, s, here); }, b.steps[i]);
      if (!r.ok) return r;
    }
    if (!sys_.contains(b.conflict)) return fail(where, "conflict names unknown constraint " + to_string(b.conflict));
    if (!falsified(sys_, b.conflict, state)) {
      return fail(where, "constraint " + to_string(b.conflict) + " is not violated at the end of the block");
    }
    return {true, {}, {}};
  }

 private:
  CheckResult step(Coloring& state, const Propagate& s, const std::string& where) {
    if (s.lit.point >= sys_.size()) return fail(where, "literal on unknown point");
    if (!sys_.contains(s.by)) return fail(where, "unknown constraint " + to_string(s.by));
    Coloring premises(sys_.size(), Color::Unset);
    for (const auto& p : s.premises) {
      if (p.point >= sys_.size() || state[p.point] != p.color()) {
        return fail(where, "premise " + (p.point < sys_.size() ? lit_text(sys_, p) : "?") + " is not established");
      }
      premises[p.point] = p.color();
    }
    std::vector<Inference> licensed;
    if (!falsified(sys_, s.by, premises)) consequences(sys_, s.by, premises, licensed);
    const bool ok = std::any_of(licensed.begin(), licensed.end(), [&](const Inference& inf) { return inf.lit == s.lit; });
    if (!ok) {
      return fail(where, to_string(s.by) + " does not license " + lit_text(sys_, s.lit) + " from the given premises");
    }
    if (state[s.lit.point] != Color::Unset && state[s.lit.point] != s.lit.color()) {
      return fail(where, lit_text(sys_, s.lit) + " contradicts the branch; expected a CONFLICT step");
    }
    state[s.lit.point] = s.lit.color();
    return {true, {}, {}};
  }

  CheckResult step(Coloring& state, const Probe& s, const std::string& where) {
    if (s.assumed.point >= sys_.size()) return fail(where, "probe on unknown point");
    if (state[s.assumed.point] != Color::Unset) {
      return fail(where, "probe assumption on " + sys_.label(s.assumed.point) + " which is already assigned");
    }
    Coloring inner = state;
    inner[s.assumed.point] = s.assumed.color();
    CheckResult r = block(std::move(inner), s.body, where);
    if (!r.ok) return r;
    state[s.assumed.point] = s.assumed.negated().color();
    return r;
  }

  static CheckResult fail(const std::string& where, std::string reason) { return {false, where, std::move(reason)}; }

  const ConstraintSystem& sys_;
};

}  // namespace

CheckResult check_certificate(const ConstraintSystem& sys, const Certificate& cert) {
  try {
    sys.check();
  } catch (const std::exception& e) {
    return {false, "system", e.what()};
  }
  if (!cert.split) return {false, "root", "certificate has no case split"};
  if (cert.split->kind != Kind::Triple || !sys.contains(*cert.split)) {
    return {false, "root", "split " + to_string(*cert.split) + " is not a TRIPLE of the system"};
  }
  auto members = sys.triples[cert.split->index].p;
  if (cert.branches.size() != 3) return {false, "root", "a TRIPLE split needs exactly 3 branches"};
  std::array<std::size_t, 3> assumed{};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!cert.branches[i].assumed.red) {
      return {false, "branch " + std::to_string(i), "branch assumption must be a red literal"};
    }
    assumed[i] = cert.branches[i].assumed.point;
  }
  std::sort(members.begin(), members.end());
  std::sort(assumed.begin(), assumed.end());
  if (members != assumed) return {false, "root", "branch assumptions are not the members of the split TRIPLE"};

  Replay replay(sys);
  for (std::size_t i = 0; i < 3; ++i) {
    Coloring state(sys.size(), Color::Unset);
    state[cert.branches[i].assumed.point] = Color::Red;
    CheckResult r = replay.block(std::move(state), cert.branches[i].body, "branch " + std::to_string(i));
    if (!r.ok) return r;
  }
  return {true, {}, {}};
}

}  // namespace ks::csp
