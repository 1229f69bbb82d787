#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fgc {

enum class ErrorCode {
  NegativeWeight,
  WrongLength,
  NotNormalized,
  NegativeEntry,
  EmptyInput,
  LengthMismatch,
  DimensionMismatch,
  NotSquareGrid,
  TooLargeToMaterialize,
  ThetaOutOfRange,
  NonFiniteCost,
  NumericalOverflow,
  ConfigInvalid,
  OverlappingHumps,
  FileNotFound,
  UnsupportedFormat,
  ZeroMassImage,
  NaiveTooLarge,
  ParseError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NegativeWeight: return "NegativeWeight";
    case ErrorCode::WrongLength: return "WrongLength";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotSquareGrid: return "NotSquareGrid";
    case ErrorCode::TooLargeToMaterialize: return "TooLargeToMaterialize";
    case ErrorCode::ThetaOutOfRange: return "ThetaOutOfRange";
    case ErrorCode::NonFiniteCost: return "NonFiniteCost";
    case ErrorCode::NumericalOverflow: return "NumericalOverflow";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::OverlappingHumps: return "OverlappingHumps";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::ZeroMassImage: return "ZeroMassImage";
    case ErrorCode::NaiveTooLarge: return "NaiveTooLarge";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every library failure is reported through this type; `code()` is stable and
/// is what the CLI serializes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fgc
