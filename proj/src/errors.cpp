#include "gpcfid/errors.hpp"

namespace gpcfid {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::InvalidFamily: return "InvalidFamily";
    case ErrorKind::BadProbabilities: return "BadProbabilities";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotCptp: return "NotCPTP";
    case ErrorKind::FamilyMismatch: return "FamilyMismatch";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::InvalidTrajectory: return "InvalidTrajectory";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::Parse: return "ParseError";
  }
  return "Error";
}

}  // namespace gpcfid
