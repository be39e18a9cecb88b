#include "orbis/error.hpp"

namespace orbis {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::ParabolicInCocompact: return "ParabolicInCocompact";
    case ErrorCode::NotHyperbolic: return "NotHyperbolic";
    case ErrorCode::Inconsistent: return "Inconsistent";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::MissingRoot: return "MissingRoot";
    case ErrorCode::QuadratureFailure: return "QuadratureFailure";
    case ErrorCode::OutOfStrip: return "OutOfStrip";
    case ErrorCode::AmbiguousFit: return "AmbiguousFit";
    case ErrorCode::NonIntegerFit: return "NonIntegerFit";
    case ErrorCode::GridTooCoarse: return "GridTooCoarse";
    case ErrorCode::NonIntegerMultiplicity: return "NonIntegerMultiplicity";
    case ErrorCode::OverlapUnresolved: return "OverlapUnresolved";
  }
  return "Unknown";
}

}  // namespace orbis
