#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bfree {

enum class ErrorCode {
  kInvalidArgument,
  kModulusTooSmall,
  kNotCoprime,
  kEmptyFamily,
  kNoTailBoundAvailable,
  kRangeEmpty,
  kOverflow,
  kNotRootedFamily,
  kPatternTooWide,
  kPeriodTooLarge,
  kLengthOverCap,
  kStateBudgetExceeded,
  kNotMultipleOfPeriod,
  kNotPrime,
  kWindowTooShort,
  kSigmaInfinite,
  kNoSamples,
};

std::string_view error_name(ErrorCode code);

// Every library failure is reported through this exception; `code()` is the
// machine-readable reason and `field()` optionally names the offending input.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string field = {})
      : std::runtime_error(message), code_(code), field_(std::move(field)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }

 private:
  ErrorCode code_;
  std::string field_;
};

inline std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kModulusTooSmall: return "ModulusTooSmall";
    case ErrorCode::kNotCoprime: return "NotCoprime";
    case ErrorCode::kEmptyFamily: return "EmptyFamily";
    case ErrorCode::kNoTailBoundAvailable: return "NoTailBoundAvailable";
    case ErrorCode::kRangeEmpty: return "RangeEmpty";
    case ErrorCode::kOverflow: return "Overflow";
    case ErrorCode::kNotRootedFamily: return "NotRootedFamily";
    case ErrorCode::kPatternTooWide: return "PatternTooWide";
    case ErrorCode::kPeriodTooLarge: return "PeriodTooLarge";
    case ErrorCode::kLengthOverCap: return "LengthOverCap";
    case ErrorCode::kStateBudgetExceeded: return "StateBudgetExceeded";
    case ErrorCode::kNotMultipleOfPeriod: return "NotMultipleOfPeriod";
    case ErrorCode::kNotPrime: return "NotPrime";
    case ErrorCode::kWindowTooShort: return "WindowTooShort";
    case ErrorCode::kSigmaInfinite: return "SigmaInfinite";
    case ErrorCode::kNoSamples: return "NoSamples";
  }
  return "Unknown";
}

}  // namespace bfree
