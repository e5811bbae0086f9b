#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace distweyl {

enum class ErrorKind {
  OrderOutOfRange,
  LengthMismatch,
  ZeroRho,
  NotAPermutation,
  NotUnitLowerTriangular,
  IndexOutOfRange,
  ShapeMismatch,
  StructureViolation,
  NonPolynomialCoefficient,
  DomainViolation,
  Overflow,
  SingularAtLambda,
  NonIntegrableTail,
  NonDifferentiableKind,
  ContinuityAtZeroRequired,
  InvalidCase,
  InvalidConfig,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries one of the kinds above so that
/// callers (the CLI in particular) can map it to an exit code.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace distweyl
