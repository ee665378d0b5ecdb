#include "safe/error.hpp"

namespace safe {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kSyntaxError: return "SyntaxError";
    case ErrorCode::kUnbalancedParenthesis: return "UnbalancedParenthesis";
    case ErrorCode::kUnmatchedRingDigit: return "UnmatchedRingDigit";
    case ErrorCode::kDuplicateRingBond: return "DuplicateRingBond";
    case ErrorCode::kUnknownElement: return "UnknownElement";
    case ErrorCode::kValenceViolation: return "ValenceViolation";
    case ErrorCode::kInvalidGraph: return "InvalidGraph";
    case ErrorCode::kMappingCapExceeded: return "MappingCapExceeded";
    case ErrorCode::kWidthMismatch: return "WidthMismatch";
    case ErrorCode::kTooSmall: return "TooSmall";
    case ErrorCode::kRingBondCut: return "RingBondCut";
    case ErrorCode::kUnsupportedCutOrder: return "UnsupportedCutOrder";
    case ErrorCode::kOpenAttachment: return "OpenAttachment";
    case ErrorCode::kTooManyLabels: return "TooManyLabels";
    case ErrorCode::kUnrecognizedCharacter: return "UnrecognizedCharacter";
    case ErrorCode::kTargetTooSmall: return "TargetTooSmall";
    case ErrorCode::kNoWildcard: return "NoWildcard";
    case ErrorCode::kTooManyWildcards: return "TooManyWildcards";
    case ErrorCode::kNoEligibleSite: return "NoEligibleSite";
    case ErrorCode::kPrefixMismatch: return "PrefixMismatch";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string format_message(ErrorCode code, const std::string& message,
                           std::optional<std::size_t> position) {
  std::string out(error_code_name(code));
  out += ": ";
  out += message;
  if (position) {
    out += " (at position " + std::to_string(*position) + ")";
  }
  return out;
}

}  // namespace

SafeError::SafeError(ErrorCode code, const std::string& message,
                     std::optional<std::size_t> position)
    : std::runtime_error(format_message(code, message, position)),
      code_(code),
      position_(position),
      detail_(message) {}

}  // namespace safe
