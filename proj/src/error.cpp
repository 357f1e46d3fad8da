#include "curvequad/error.hpp"

namespace curvequad {

std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::PoleInSupport: return "PoleInSupport";
    case ErrorKind::IntegrationFailure: return "IntegrationFailure";
    case ErrorKind::InsufficientDegree: return "InsufficientDegree";
    case ErrorKind::DegenerateMeasure: return "DegenerateMeasure";
    case ErrorKind::NotPolynomialParametrization: return "NotPolynomialParametrization";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::NumericalStall: return "NumericalStall";
    case ErrorKind::InfeasibleStart: return "InfeasibleStart";
    case ErrorKind::Nonconvergence: return "Nonconvergence";
    case ErrorKind::MassCorrectionNegative: return "MassCorrectionNegative";
  }
  return "Unknown";
}

}  // namespace curvequad
