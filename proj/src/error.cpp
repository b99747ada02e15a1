#include "orthowalk/error.hpp"

namespace orthowalk {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroStep: return "ZeroStep";
    case ErrorCode::SpanViolation: return "SpanViolation";
    case ErrorCode::NonPositivePoint: return "NonPositivePoint";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::OrthantNotContained: return "OrthantNotContained";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::DegenerateStepset: return "DegenerateStepset";
    case ErrorCode::Divergent: return "Divergent";
    case ErrorCode::AttemptsExhausted: return "AttemptsExhausted";
    case ErrorCode::UnknownAtom: return "UnknownAtom";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ImpossibleEndpoint: return "ImpossibleEndpoint";
    case ErrorCode::UnknownFormat: return "UnknownFormat";
    case ErrorCode::DegenerateHull: return "DegenerateHull";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace orthowalk
