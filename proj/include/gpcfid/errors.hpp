#pragma once

#include <stdexcept>
#include <string>

namespace gpcfid {

enum class ErrorKind {
  NotHermitian,
  UnsupportedDimension,
  IndexOutOfRange,
  InvalidFamily,
  BadProbabilities,
  DimensionMismatch,
  NotCptp,
  FamilyMismatch,
  TooLarge,
  OutOfRange,
  InvalidTrajectory,
  InvalidState,
  Parse,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised by channel_from_eigenvalues. `bound` names the violated side of the
// Fujiwara-Algoet inequality, `violation` is how far past it the spectrum lies.
class NotCptpError : public Error {
 public:
  enum class Bound { Lower, Upper };

  NotCptpError(Bound bound, double violation, const std::string& what)
      : Error(ErrorKind::NotCptp, what), bound_(bound), violation_(violation) {}

  Bound bound() const noexcept { return bound_; }
  double violation() const noexcept { return violation_; }

 private:
  Bound bound_;
  double violation_;
};

}  // namespace gpcfid
