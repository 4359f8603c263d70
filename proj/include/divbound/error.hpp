#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace divbound {

enum class ErrorCode {
  NonPositiveMass,
  NotNormalized,
  TooShort,
  LengthMismatch,
  SamplingExhausted,
  NonPositiveArgument,
  DegenerateDenominator,
  RegionViolation,
  ConfigInvalid,
  ParseError,
  UnknownName,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveMass: return "NonPositiveMass";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::SamplingExhausted: return "SamplingExhausted";
    case ErrorCode::NonPositiveArgument: return "NonPositiveArgument";
    case ErrorCode::DegenerateDenominator: return "DegenerateDenominator";
    case ErrorCode::RegionViolation: return "RegionViolation";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownName: return "UnknownName";
  }
  return "Unknown";
}

/// Every failure raised by the library. `index()` names the offending
/// element (mass position, line number) when one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        std::optional<std::size_t> index = std::nullopt)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        index_(index) {}

  ErrorCode code() const noexcept { return code_; }
  std::optional<std::size_t> index() const noexcept { return index_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> index_;
};

}  // namespace divbound
