#ifndef SMFRET_ERROR_HPP
#define SMFRET_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace smfret {

/// Every failure the library reports. The CLI maps each kind to a stable exit code.
enum class ErrorKind {
  LengthMismatch,
  NegativeCount,
  EmptyTrace,
  NegativeParameter,
  FractionOutOfRange,
  InvalidParameter,
  ZeroTotal,
  NonPositiveDistance,
  BadBinning,
  DegenerateData,
  EmptyInput,
  OutOfDomainPoint,
  FileNotFound,
  MalformedRow,
  MixedMode,
  UnknownKey,
  MissingRequiredKey,
  ValueOutOfDomain,
  WriteFailed,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::LengthMismatch: return "LengthMismatch";
    case ErrorKind::NegativeCount: return "NegativeCount";
    case ErrorKind::EmptyTrace: return "EmptyTrace";
    case ErrorKind::NegativeParameter: return "NegativeParameter";
    case ErrorKind::FractionOutOfRange: return "FractionOutOfRange";
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::ZeroTotal: return "ZeroTotal";
    case ErrorKind::NonPositiveDistance: return "NonPositiveDistance";
    case ErrorKind::BadBinning: return "BadBinning";
    case ErrorKind::DegenerateData: return "DegenerateData";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::OutOfDomainPoint: return "OutOfDomainPoint";
    case ErrorKind::FileNotFound: return "FileNotFound";
    case ErrorKind::MalformedRow: return "MalformedRow";
    case ErrorKind::MixedMode: return "MixedMode";
    case ErrorKind::UnknownKey: return "UnknownKey";
    case ErrorKind::MissingRequiredKey: return "MissingRequiredKey";
    case ErrorKind::ValueOutOfDomain: return "ValueOutOfDomain";
    case ErrorKind::WriteFailed: return "WriteFailed";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

namespace detail {

inline void require_non_negative(double value, std::string_view name) {
  if (!(value >= 0.0)) {
    throw Error(ErrorKind::NegativeParameter,
                std::string(name) + " must be >= 0, got " + std::to_string(value));
  }
}

inline void require_fraction(double value, std::string_view name) {
  if (!(value >= 0.0 && value < 1.0)) {
    throw Error(ErrorKind::FractionOutOfRange,
                std::string(name) + " must lie in [0,1), got " + std::to_string(value));
  }
}

}  // namespace detail
}  // namespace smfret

#endif  // SMFRET_ERROR_HPP
