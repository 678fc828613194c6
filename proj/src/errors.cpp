#include "ricvol/errors.hpp"

namespace ricvol {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OutOfChart: return "OutOfChart";
    case ErrorKind::SingularMetric: return "SingularMetric";
    case ErrorKind::DegeneratePlane: return "DegeneratePlane";
    case ErrorKind::BadProfile: return "BadProfile";
    case ErrorKind::DivergentIntegral: return "DivergentIntegral";
    case ErrorKind::PastConjugate: return "PastConjugate";
    case ErrorKind::ConjugateInsideRange: return "ConjugateInsideRange";
    case ErrorKind::QuadratureUnderResolved: return "QuadratureUnderResolved";
    case ErrorKind::BoundaryPoint: return "BoundaryPoint";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::Precondition: return "Precondition";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ConstraintError: return "ConstraintError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace ricvol
