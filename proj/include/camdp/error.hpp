#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace camdp {

enum class ErrorCode {
  kNotStochastic,
  kNegativeEntry,
  kDimensionMismatch,
  kBadGamma,
  kParse,
  kPolicyShapeMismatch,
  kSizeOverflow,
  kSingularSystem,
  kMaxItersExceeded,
  kReducible,
  kNotErgodic,
  kInvalidArgument,
};

std::string_view to_string(ErrorCode code);

// Every library failure is reported through this type; `code()` lets callers
// (and the CLI exit-code mapping) branch without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotStochastic: return "NotStochastic";
    case ErrorCode::kNegativeEntry: return "NegativeEntry";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kBadGamma: return "BadGamma";
    case ErrorCode::kParse: return "ParseError";
    case ErrorCode::kPolicyShapeMismatch: return "PolicyShapeMismatch";
    case ErrorCode::kSizeOverflow: return "SizeOverflow";
    case ErrorCode::kSingularSystem: return "SingularSystem";
    case ErrorCode::kMaxItersExceeded: return "MaxItersExceeded";
    case ErrorCode::kReducible: return "Reducible";
    case ErrorCode::kNotErgodic: return "NotErgodic";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace camdp
