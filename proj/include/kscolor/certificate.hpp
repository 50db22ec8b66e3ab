#pragma once

// Refutation certificates shaped like the hand proof of uncolourability:
// a case split over the three points of one TRIPLE, and in every branch a
// run of unit inferences and failed-literal probes ending in a conflict.

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kscolor/csp.hpp"

namespace ks::csp {

struct Propagate {
  Literal lit;
  ConstraintRef by;
  std::vector<Literal> premises;
  bool operator==(const Propagate&) const = default;
};

struct Probe;
using Step = std::variant<Propagate, Probe>;

/// A sequence of steps that must end in a falsified constraint.
struct Block {
  std::vector<Step> steps;
  ConstraintRef conflict;
  bool operator==(const Block&) const;
};

/// Assume `assumed`, derive a conflict in `body`, conclude the negation.
struct Probe {
  Literal assumed;
  Block body;
  bool operator==(const Probe&) const = default;
};

inline bool Block::operator==(const Block& o) const { return steps == o.steps && conflict == o.conflict; }

struct Branch {
  Literal assumed;
  Block body;
  bool operator==(const Branch&) const = default;
};

struct Certificate {
  std::optional<ConstraintRef> split;  ///< the TRIPLE being case-split
  std::vector<Branch> branches;        ///< one per member, each assuming it red
  bool operator==(const Certificate&) const = default;
};

struct NotDerivable {
  std::string reason;
};

/// Builds the certificate: for each corner of `corners` assume it red and
/// propagate; then walk `circuit` cyclically from that corner, probing each
/// point not yet red with "green", which propagation alone must refute, and
/// concluding it red. The branch closes at the first conflict.
std::variant<Certificate, NotDerivable> prove_paper_style(const ConstraintSystem& sys,
                                                          const std::array<std::size_t, 3>& corners,
                                                          const std::vector<std::size_t>& circuit);

struct CheckResult {
  bool ok = false;
  std::string where;   ///< e.g. "branch 1 / step 4 / step 2"
  std::string reason;
};

/// Replays every step: each Propagate must be licensed by its constraint
/// from its premises, all of which are established on the branch; each Block
/// must end in a constraint that is falsified there; the split must be a
/// TRIPLE of the system whose three members are the branch assumptions.
CheckResult check_certificate(const ConstraintSystem& sys, const Certificate& cert);

}  // namespace ks::csp
