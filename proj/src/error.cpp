#include "ctgen/error.hpp"

namespace ctgen {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnequalSums: return "UnequalSums";
    case ErrorCode::Empty: return "Empty";
    case ErrorCode::NotBigraphical: return "NotBigraphical";
    case ErrorCode::NotGraphical: return "NotGraphical";
    case ErrorCode::OddSum: return "OddSum";
    case ErrorCode::ProbabilityOutOfRange: return "ProbabilityOutOfRange";
    case ErrorCode::InvalidDistribution: return "InvalidDistribution";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::ApproximateCutoff: return "ApproximateCutoff";
    case ErrorCode::FixtureInvalid: return "FixtureInvalid";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
  }
  return "Unknown";
}

}  // namespace ctgen
