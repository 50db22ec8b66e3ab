#pragma once

#include <stdexcept>
#include <string>

namespace ks {

// Every failure the library reports carries one of these kinds; the CLI maps
// them onto its exit codes.
enum class ErrorKind {
  NonUnitVector,
  DegeneratePoint,
  BetaOutOfRange,
  EquatorOrSouthern,
  NotMoreSoutherly,
  DegenerateEndpoint,
  BadStep,
  BadAngle,
  TooLarge,
  TooManyPoints,
  ParseError,
  DuplicateId,
  ZeroVector,
  BadIndex,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ks
