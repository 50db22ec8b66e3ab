#include <string>

#include "kscolor/formats.hpp"

namespace ks::formats {

std::string write_dimacs(const csp::CnfDoc& cnf) {
  std::string out;
  for (const auto& [var, label] : cnf.comments) out += "c " + std::to_string(var) + " " + label + "\n";
  out += "p cnf " + std::to_string(cnf.variables) + " " + std::to_string(cnf.clauses.size()) + "\n";
  for (const auto& clause : cnf.clauses) {
    for (int lit : clause) out += std::to_string(lit) + " ";
    out += "0\n";
  }
  return out;
}

}  // namespace ks::formats
