#include "distweyl/error.hpp"

namespace distweyl {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OrderOutOfRange: return "OrderOutOfRange";
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::ZeroRho: return "ZeroRho";
    case ErrorKind::NotAPermutation: return "NotAPermutation";
    case ErrorKind::NotUnitLowerTriangular: return "NotUnitLowerTriangular";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::StructureViolation: return "StructureViolation";
    case ErrorKind::NonPolynomialCoefficient: return "NonPolynomialCoefficient";
    case ErrorKind::DomainViolation: return "DomainViolation";
    case ErrorKind::Overflow: return "Overflow";
    case ErrorKind::SingularAtLambda: return "SingularAtLambda";
    case ErrorKind::NonIntegrableTail: return "NonIntegrableTail";
    case ErrorKind::NonDifferentiableKind: return "NonDifferentiableKind";
    case ErrorKind::ContinuityAtZeroRequired: return "ContinuityAtZeroRequired";
    case ErrorKind::InvalidCase: return "InvalidCase";
    case ErrorKind::InvalidConfig: return "InvalidConfig";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

}  // namespace distweyl
