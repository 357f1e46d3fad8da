#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace curvequad {

enum class ErrorKind {
  InvalidInput,
  ZeroPolynomial,
  DimensionMismatch,
  PoleInSupport,
  IntegrationFailure,
  InsufficientDegree,
  DegenerateMeasure,
  NotPolynomialParametrization,
  DomainError,
  NumericalStall,
  InfeasibleStart,
  Nonconvergence,
  MassCorrectionNegative,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised when a moment sequence is exactly represented by `depth` atoms, so no
// orthogonal polynomial of degree `depth` exists.
class DegenerateMeasure : public Error {
 public:
  explicit DegenerateMeasure(int depth)
      : Error(ErrorKind::DegenerateMeasure,
              "measure is supported on at most " + std::to_string(depth) + " atoms"),
        depth_(depth) {}

  int depth() const noexcept { return depth_; }

 private:
  int depth_;
};

}  // namespace curvequad
