#include <sstream>
#include <vector>

#include "kscolor/error.hpp"
#include "kscolor/formats.hpp"

// Certificate text, one step per line, nesting shown by indentation (which
// the reader ignores):
//
//   kscolor-certificate 1
//   SPLIT T0
//   ASSUME R3
//   PROP G5 T0 R3
//   PROBE G7
//     PROP G9 S2 G7 G5
//     CONFLICT T1
//   CONCLUDE R7
//   CONFLICT T4
//   ASSUME R5
//   ...
//   END
//
// Literals are R<point> (red) or G<point> (green).

namespace ks::formats {

namespace {

constexpr const char* kHeader = "kscolor-certificate 1";

std::string lit(const csp::Literal& l) { return (l.red ? "R" : "G") + std::to_string(l.point); }

void write_block(std::string& out, const csp::Block& block, int depth) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  for (const auto& step : block.steps) {
    if (const auto* p = std::get_if<csp::Propagate>(&step)) {
      out += pad + "PROP " + lit(p->lit) + " " + csp::to_string(p->by);
      for (const auto& q : p->premises) out += " " + lit(q);
      out += "\n";
    } else {
      const auto& probe = std::get<csp::Probe>(step);
      out += pad + "PROBE " + lit(probe.assumed) + "\n";
      write_block(out, probe.body, depth + 1);
      out += pad + "CONCLUDE " + lit(probe.assumed.negated()) + "\n";
    }
  }
  out += pad + "CONFLICT " + csp::to_string(block.conflict) + "\n";
}

struct Line {
  std::size_t number;
  std::vector<std::string> tokens;
};

class Reader {
 public:
  explicit Reader(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t n = 0;
    while (std::getline(in, raw)) {
      ++n;
      std::istringstream words(raw);
      Line line{n, {}};
      for (std::string w; words >> w;) line.tokens.push_back(w);
      if (!line.tokens.empty()) lines_.push_back(std::move(line));
    }
    last_line_ = n;
  }

  bool done() const { return pos_ >= lines_.size(); }

  const Line& next(const char* expecting) {
    if (done()) fail(last_line_, std::string("unexpected end of file, expected ") + expecting);
    return lines_[pos_++];
  }

  const Line& peek(const char* expecting) {
    if (done()) fail(last_line_, std::string("unexpected end of file, expected ") + expecting);
    return lines_[pos_];
  }

  [[noreturn]] static void fail(std::size_t line, const std::string& what) {
    throw Error(ErrorKind::ParseError, "line " + std::to_string(line) + ": " + what);
  }

 private:
  std::vector<Line> lines_;
  std::size_t pos_ = 0;
  std::size_t last_line_ = 0;
};

csp::Literal parse_lit(const Line& line, const std::string& tok) {
  if (tok.size() < 2 || (tok[0] != 'R' && tok[0] != 'G')) Reader::fail(line.number, "bad literal '" + tok + "'");
  std::size_t value = 0;
  for (std::size_t i = 1; i < tok.size(); ++i) {
    if (tok[i] < '0' || tok[i] > '9') Reader::fail(line.number, "bad literal '" + tok + "'");
    value = value * 10 + static_cast<std::size_t>(tok[i] - '0');
  }
  return {value, tok[0] == 'R'};
}

csp::ConstraintRef parse_ref(const Line& line, const std::string& tok) {
  const auto ref = csp::parse_constraint_ref(tok);
  if (!ref) Reader::fail(line.number, "bad constraint id '" + tok + "'");
  return *ref;
}

void expect_arity(const Line& line, std::size_t count) {
  if (line.tokens.size() != count) {
    Reader::fail(line.number, line.tokens[0] + " takes " + std::to_string(count - 1) + " argument(s)");
  }
}

csp::Block read_block(Reader& in) {
  csp::Block block;
  for (;;) {
    const Line& line = in.next("a step or CONFLICT");
    const std::string& op = line.tokens[0];
    if (op == "CONFLICT") {
      expect_arity(line, 2);
      block.conflict = parse_ref(line, line.tokens[1]);
      return block;
    }
    if (op == "PROP") {
      if (line.tokens.size() < 3) Reader::fail(line.number, "PROP needs a literal and a constraint id");
      csp::Propagate p{parse_lit(line, line.tokens[1]), parse_ref(line, line.tokens[2]), {}};
      for (std::size_t k = 3; k < line.tokens.size(); ++k) p.premises.push_back(parse_lit(line, line.tokens[k]));
      block.steps.emplace_back(std::move(p));
      continue;
    }
    if (op == "PROBE") {
      expect_arity(line, 2);
      csp::Probe probe{parse_lit(line, line.tokens[1]), {}};
      probe.body = read_block(in);
      const Line& end = in.next("CONCLUDE");
      if (end.tokens[0] != "CONCLUDE") Reader::fail(end.number, "expected CONCLUDE after a probe");
      expect_arity(end, 2);
      if (!(parse_lit(end, end.tokens[1]) == probe.assumed.negated())) {
        Reader::fail(end.number, "CONCLUDE must negate the probe assumption");
      }
      block.steps.emplace_back(std::move(probe));
      continue;
    }
    Reader::fail(line.number, "expected PROP, PROBE or CONFLICT, found '" + op + "' (blocks must end in CONFLICT)");
  }
}

}  // namespace

std::string write_certificate(const csp::Certificate& cert) {
  std::string out = std::string(kHeader) + "\n";
  if (cert.split) out += "SPLIT " + csp::to_string(*cert.split) + "\n";
  for (const auto& branch : cert.branches) {
    out += "ASSUME " + lit(branch.assumed) + "\n";
    write_block(out, branch.body, 0);
  }
  out += "END\n";
  return out;
}

csp::Certificate parse_certificate(std::string_view text) {
  Reader in(text);
  const Line& header = in.next("the certificate header");
  std::string joined;
  for (const auto& t : header.tokens) joined += (joined.empty() ? "" : " ") + t;
  if (joined != kHeader) Reader::fail(header.number, std::string("expected header '") + kHeader + "'");

  csp::Certificate cert;
  if (in.peek("SPLIT or END").tokens[0] == "SPLIT") {
    const Line& split = in.next("SPLIT");
    expect_arity(split, 2);
    cert.split = parse_ref(split, split.tokens[1]);
  }
  for (;;) {
    const Line& line = in.next("ASSUME or END");
    if (line.tokens[0] == "END") {
      expect_arity(line, 1);
      break;
    }
    if (line.tokens[0] != "ASSUME") Reader::fail(line.number, "expected ASSUME or END, found '" + line.tokens[0] + "'");
    expect_arity(line, 2);
    csp::Branch branch{parse_lit(line, line.tokens[1]), {}};
    branch.body = read_block(in);
    cert.branches.push_back(std::move(branch));
  }
  if (!in.done()) Reader::fail(in.peek("").number, "content after END");
  return cert;
}

}  // namespace ks::formats
