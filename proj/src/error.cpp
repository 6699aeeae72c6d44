#include "allax/error.hpp"

namespace allax {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ModulusOutOfRange: return "ModulusOutOfRange";
    case ErrorCode::BadBoundaryPhase: return "BadBoundaryPhase";
    case ErrorCode::OddPeriodNotCanonicalized: return "OddPeriodNotCanonicalized";
    case ErrorCode::IndexOutOfDomain: return "IndexOutOfDomain";
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorCode::NonFiniteEntry: return "NonFiniteEntry";
    case ErrorCode::WindowTooSmall: return "WindowTooSmall";
    case ErrorCode::NotStairShaped: return "NotStairShaped";
    case ErrorCode::RhoDegenerate: return "RhoDegenerate";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::GradientUnavailable: return "GradientUnavailable";
    case ErrorCode::ZeroArgument: return "ZeroArgument";
    case ErrorCode::DegreeMismatch: return "DegreeMismatch";
    case ErrorCode::TruncationTooTight: return "TruncationTooTight";
    case ErrorCode::DiskExit: return "DiskExit";
    case ErrorCode::StepRejected: return "StepRejected";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, std::string message,
             std::optional<std::int64_t> index)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      index_(index) {}

}  // namespace allax
