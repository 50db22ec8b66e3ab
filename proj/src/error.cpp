#include "kscolor/error.hpp"

namespace ks {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonUnitVector: return "NonUnitVector";
    case ErrorKind::DegeneratePoint: return "DegeneratePoint";
    case ErrorKind::BetaOutOfRange: return "BetaOutOfRange";
    case ErrorKind::EquatorOrSouthern: return "EquatorOrSouthern";
    case ErrorKind::NotMoreSoutherly: return "NotMoreSoutherly";
    case ErrorKind::DegenerateEndpoint: return "DegenerateEndpoint";
    case ErrorKind::BadStep: return "BadStep";
    case ErrorKind::BadAngle: return "BadAngle";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::TooManyPoints: return "TooManyPoints";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DuplicateId: return "DuplicateId";
    case ErrorKind::ZeroVector: return "ZeroVector";
    case ErrorKind::BadIndex: return "BadIndex";
  }
  return "Error";
}

}  // namespace ks
