#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace allax {

enum class ErrorCode {
  ModulusOutOfRange,
  BadBoundaryPhase,
  OddPeriodNotCanonicalized,
  IndexOutOfDomain,
  NonSquare,
  DimensionMismatch,
  DimensionTooLarge,
  NonFiniteEntry,
  WindowTooSmall,
  NotStairShaped,
  RhoDegenerate,
  StepTooLarge,
  GradientUnavailable,
  ZeroArgument,
  DegreeMismatch,
  TruncationTooTight,
  DiskExit,
  StepRejected,
  InvalidConfig,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Library-wide exception. Carries a machine-readable code and, where one
/// applies, the offending coefficient or matrix index.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message,
        std::optional<std::int64_t> index = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::int64_t> index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  std::optional<std::int64_t> index_;
};

}  // namespace allax
