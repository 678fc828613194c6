#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ricvol {

enum class ErrorKind {
  OutOfChart,
  SingularMetric,
  DegeneratePlane,
  BadProfile,
  DivergentIntegral,
  PastConjugate,
  ConjugateInsideRange,
  QuadratureUnderResolved,
  BoundaryPoint,
  HypothesisViolated,
  Precondition,
  ParseError,
  ConstraintError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the toolkit; the kind drives CLI exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ricvol
