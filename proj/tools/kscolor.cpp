// kscolor: build, verify and export Kochen-Specker colouring systems.
//
// Exit codes
//   0  colourable / success        1  uncolourable / certificate rejected
//   2  I/O error                   3  geometry validation failure
//   4  precondition or usage error 5  parse error
//   6  undecided (--mode propagate-only without a verdict)

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "kscolor/certificate.hpp"
#include "kscolor/construct.hpp"
#include "kscolor/descent.hpp"
#include "kscolor/error.hpp"
#include "kscolor/formats.hpp"

namespace {

using namespace ks;

enum Exit : int {
  kColorable = 0,
  kUncolorable = 1,
  kIo = 2,
  kGeometry = 3,
  kPrecondition = 4,
  kParse = 5,
  kUndecided = 6,
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GeometryFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::DuplicateId:
    case ErrorKind::ZeroVector:
    case ErrorKind::BadIndex:
    case ErrorKind::NonUnitVector:
      return kParse;
    default:
      return kPrecondition;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content) || !out.flush()) throw IoError("cannot write " + path);
}

void require_geometry(const csp::ConstraintSystem& sys, const Tolerances& tol) {
  const auto violations = construct::validate_geometry(sys, tol);
  if (violations.empty()) return;
  std::string msg = std::to_string(violations.size()) + " constraint(s) not licensed by the geometry";
  for (std::size_t i = 0; i < violations.size() && i < 5; ++i) {
    msg += "\n  " + csp::to_string(violations[i].ref) + ": " + violations[i].what;
  }
  throw GeometryFailure(msg);
}

std::string color_char(csp::Color c) { return c == csp::Color::Red ? "R" : c == csp::Color::Green ? "G" : "?"; }

// --- construct ---------------------------------------------------------------

struct ConstructOpts {
  double step_deg = 30.0;
  std::string out;
  std::string svg;
  std::string svg_circuit;
  bool json = false;
};

int run_construct(const ConstructOpts& o) {
  const construct::Construction c = construct::build_construction(o.step_deg);
  require_geometry(c.system, kDefaultTolerances);

  formats::SystemDoc doc;
  doc.system = c.system;
  doc.circuit = c.circuit;
  doc.corners = c.corners;
  if (!o.out.empty()) write_file(o.out, formats::write_system(doc));

  if (!o.svg.empty()) {
    const construct::Gadget& g = c.gadgets.front();
    formats::SvgLayers layers;
    layers.latitude_circles_deg = {30.0, 60.0};
    layers.chains.push_back({"descent", g.chain.points});
    for (std::size_t i = 0; i < g.chain.points.size(); ++i) {
      layers.points.push_back({"psi" + std::to_string(i), g.chain.points[i]});
    }
    layers.points.push_back({"pole", g.pole});
    write_file(o.svg, formats::render_svg(g.frame, layers));
  }
  if (!o.svg_circuit.empty()) {
    // Tilted so that no tour point lies on the figure's equator.
    const UnitVec pole = UnitVec::normalized({1.0, 1.0, 1.0});
    const Frame frame = Frame::from_pole_meridian(pole, UnitVec::checked({0.0, 0.0, 1.0}));
    formats::SvgLayers layers;
    for (auto i : c.circuit) layers.points.push_back({c.system.label(i), c.system.points[i].rep()});
    write_file(o.svg_circuit, formats::render_svg(frame, layers));
  }

  const auto& s = c.system;
  if (o.json) {
    nlohmann::ordered_json j{{"points", s.size()},      {"triples", s.triples.size()}, {"pairs", s.pairs.size()},
                             {"spans", s.spans.size()}, {"gadgets", c.gadgets.size()}, {"step_deg", o.step_deg}};
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "step " << o.step_deg << " deg, " << c.gadgets.size() << " gadgets\n"
              << "points " << s.size() << "\n"
              << "triples " << s.triples.size() << "\n"
              << "pairs " << s.pairs.size() << "\n"
              << "spans " << s.spans.size() << "\n";
  }
  return kColorable;
}

// --- verify ------------------------------------------------------------------

struct VerifyOpts {
  std::string system;
  std::string mode = "full";
  std::string certificate;
  bool json = false;
};

formats::SystemDoc load_doc(const std::string& path) { return formats::parse_system(read_file(path)); }

int run_verify(const VerifyOpts& o) {
  const formats::SystemDoc doc = load_doc(o.system);
  const csp::ConstraintSystem sys = formats::materialize(doc);
  require_geometry(sys, doc.tol());

  std::optional<bool> colorable;
  csp::Coloring coloring;
  std::string note;
  if (o.mode == "brute") {
    colorable = csp::count_colorings(sys) > 0;
    if (*colorable) {
      auto v = csp::solve(sys);
      coloring = std::get<csp::Valid>(v).coloring;
    }
  } else if (o.mode == "propagate-only") {
    csp::Coloring partial(sys.size(), csp::Color::Unset);
    const auto r = csp::propagate(sys, partial);
    if (r.conflict) {
      colorable = false;
      note = "conflict at " + csp::to_string(*r.conflict);
    } else if (csp::is_valid_coloring(sys, partial)) {
      colorable = true;
      coloring = partial;
    }
  } else {
    auto v = csp::solve(sys);
    colorable = std::holds_alternative<csp::Valid>(v);
    if (*colorable) coloring = std::get<csp::Valid>(v).coloring;
  }

  std::string cert_status;
  if (!o.certificate.empty()) {
    if (!colorable.has_value() || *colorable) {
      cert_status = "not written: system is not known to be uncolorable";
    } else if (doc.circuit.empty() || !doc.corners) {
      cert_status = "NotDerivable: the system document names no circuit and corner triple";
    } else {
      auto proof = csp::prove_paper_style(sys, *doc.corners, doc.circuit);
      if (auto* cert = std::get_if<csp::Certificate>(&proof)) {
        write_file(o.certificate, formats::write_certificate(*cert));
        cert_status = "written to " + o.certificate;
      } else {
        cert_status = "NotDerivable: " + std::get<csp::NotDerivable>(proof).reason;
      }
    }
  }

  const std::string verdict = !colorable ? "UNDECIDED" : *colorable ? "VALID" : "UNCOLORABLE";
  if (o.json) {
    nlohmann::ordered_json j{{"verdict", verdict}, {"mode", o.mode}};
    if (colorable && *colorable) {
      nlohmann::ordered_json col = nlohmann::ordered_json::object();
      for (std::size_t i = 0; i < sys.size(); ++i) col[sys.label(i)] = color_char(coloring[i]);
      j["coloring"] = std::move(col);
    }
    if (!note.empty()) j["note"] = note;
    if (!cert_status.empty()) j["certificate"] = cert_status;
    std::cout << j.dump() << "\n";
  } else {
    std::cout << verdict << "\n";
    if (colorable && *colorable) {
      for (std::size_t i = 0; i < sys.size(); ++i) std::cout << "  " << sys.label(i) << " " << color_char(coloring[i]) << "\n";
    }
    if (!note.empty()) std::cout << note << "\n";
    if (!cert_status.empty()) std::cout << "certificate " << cert_status << "\n";
  }
  if (!colorable) return kUndecided;
  return *colorable ? kColorable : kUncolorable;
}

// --- small commands ------------------------------------------------------------

int run_export_cnf(const std::string& system, const std::string& out) {
  const formats::SystemDoc doc = load_doc(system);
  const std::string text = formats::write_dimacs(csp::to_cnf(formats::materialize(doc)));
  if (out.empty() || out == "-") {
    std::cout << text;
  } else {
    write_file(out, text);
  }
  return kColorable;
}

struct PlanOpts {
  double from_lat = 0, from_lon = 0, to_lat = 0, to_lon = 0;
  bool json = false;
};

int run_plan(const PlanOpts& o) {
  const descent::Path path = descent::plan(Frame::standard(), {o.from_lat, o.from_lon}, {o.to_lat, o.to_lon});
  const auto violations = descent::validate(path);
  if (!violations.empty()) {
    throw GeometryFailure("planned path fails validation at point " + std::to_string(violations.front().index) + ": " +
                          violations.front().what);
  }
  std::cout << (o.json ? formats::write_path_json(path) : formats::write_path_text(path));
  return kColorable;
}

struct DeriveOpts {
  std::string input;
  std::string out;
  bool triples = false, pairs = false, spans = false;
};

int run_derive(const DeriveOpts& o) {
  const std::string text = read_file(o.input);
  const auto first = text.find_first_not_of(" \t\r\n");
  formats::SystemDoc doc = (first != std::string::npos && text[first] == '{') ? formats::parse_system(text)
                                                                              : formats::parse_vector_list(text);
  formats::DeriveOptions opts{o.triples, o.pairs, o.spans};
  if (!opts.any()) opts = {true, true, true};
  doc.derive = opts;
  doc.system = formats::materialize(doc);
  doc.derive = {};
  require_geometry(doc.system, doc.tol());
  const std::string written = formats::write_system(doc);
  if (o.out.empty() || o.out == "-") {
    std::cout << written;
  } else {
    write_file(o.out, written);
    std::cout << "points " << doc.system.size() << "\ntriples " << doc.system.triples.size() << "\npairs "
              << doc.system.pairs.size() << "\nspans " << doc.system.spans.size() << "\n";
  }
  return kColorable;
}

int run_check_cert(const std::string& system, const std::string& cert_path) {
  const formats::SystemDoc doc = load_doc(system);
  const csp::ConstraintSystem sys = formats::materialize(doc);
  const csp::Certificate cert = formats::parse_certificate(read_file(cert_path));
  const csp::CheckResult r = csp::check_certificate(sys, cert);
  if (r.ok) {
    std::cout << "ok\n";
    return kColorable;
  }
  std::cout << "invalid at " << r.where << ": " << r.reason << "\n";
  return kUncolorable;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kochen-Specker colouring systems: construct, verify, export"};
  app.require_subcommand(1);

  ConstructOpts construct_opts;
  auto* construct_cmd = app.add_subcommand("construct", "build the 30-degree circuit construction");
  construct_cmd->add_option("--step-deg", construct_opts.step_deg, "circuit step in degrees (must divide 90)");
  construct_cmd->add_option("--out", construct_opts.out, "system document to write");
  construct_cmd->add_option("--svg", construct_opts.svg, "figure of one gadget's descent chain");
  construct_cmd->add_option("--svg-circuit", construct_opts.svg_circuit, "figure of the circuit points");
  construct_cmd->add_flag("--json", construct_opts.json, "machine-readable summary");

  VerifyOpts verify_opts;
  auto* verify_cmd = app.add_subcommand("verify", "decide colourability of a system document");
  verify_cmd->add_option("system", verify_opts.system, "system document")->required();
  verify_cmd->add_option("--mode", verify_opts.mode, "full | brute | propagate-only")
      ->check(CLI::IsMember({"full", "brute", "propagate-only"}));
  verify_cmd->add_option("--certificate", verify_opts.certificate, "write a case-split certificate here");
  verify_cmd->add_flag("--json", verify_opts.json, "machine-readable output");

  std::string cnf_system, cnf_out;
  auto* cnf_cmd = app.add_subcommand("export-cnf", "write the DIMACS CNF encoding");
  cnf_cmd->add_option("system", cnf_system, "system document")->required();
  cnf_cmd->add_option("--out", cnf_out, "output path ('-' for stdout)");

  PlanOpts plan_opts;
  auto* plan_cmd = app.add_subcommand("plan-descent", "plan a chain of great-circle descents");
  plan_cmd->add_option("--from-lat", plan_opts.from_lat)->required();
  plan_cmd->add_option("--from-lon", plan_opts.from_lon)->required();
  plan_cmd->add_option("--to-lat", plan_opts.to_lat)->required();
  plan_cmd->add_option("--to-lon", plan_opts.to_lon)->required();
  plan_cmd->add_flag("--json", plan_opts.json, "machine-readable output");

  DeriveOpts derive_opts;
  auto* derive_cmd = app.add_subcommand("derive", "derive constraints from a vector list");
  derive_cmd->add_option("vectors", derive_opts.input, "'id x y z' lines or a system document")->required();
  derive_cmd->add_flag("--triples", derive_opts.triples, "derive orthogonal triples");
  derive_cmd->add_flag("--pairs", derive_opts.pairs, "derive orthogonal pairs");
  derive_cmd->add_flag("--spans", derive_opts.spans, "derive span constraints");
  derive_cmd->add_option("--out", derive_opts.out, "output path ('-' for stdout)");

  std::string check_system, check_cert;
  auto* check_cmd = app.add_subcommand("check-cert", "replay a certificate against a system");
  check_cmd->add_option("system", check_system, "system document")->required();
  check_cmd->add_option("certificate", check_cert, "certificate text")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kPrecondition;
  }

  try {
    if (*construct_cmd) return run_construct(construct_opts);
    if (*verify_cmd) return run_verify(verify_opts);
    if (*cnf_cmd) return run_export_cnf(cnf_system, cnf_out);
    if (*plan_cmd) return run_plan(plan_opts);
    if (*derive_cmd) return run_derive(derive_opts);
    if (*check_cmd) return run_check_cert(check_system, check_cert);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const GeometryFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kGeometry;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  }
  return kPrecondition;
}
