#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace safe {

enum class ErrorCode {
  kEmptyInput,
  kSyntaxError,
  kUnbalancedParenthesis,
  kUnmatchedRingDigit,
  kDuplicateRingBond,
  kUnknownElement,
  kValenceViolation,
  kInvalidGraph,
  kMappingCapExceeded,
  kWidthMismatch,
  kTooSmall,
  kRingBondCut,
  kUnsupportedCutOrder,
  kOpenAttachment,
  kTooManyLabels,
  kUnrecognizedCharacter,
  kTargetTooSmall,
  kNoWildcard,
  kTooManyWildcards,
  kNoEligibleSite,
  kPrefixMismatch,
  kEmptyCorpus,
  kInvalidArgument,
  kIoError,
};

std::string_view error_code_name(ErrorCode code);

// Single exception type for the toolkit; callers switch on code().
class SafeError : public std::runtime_error {
 public:
  SafeError(ErrorCode code, const std::string& message,
            std::optional<std::size_t> position = std::nullopt);

  ErrorCode code() const noexcept { return code_; }
  // Character offset into the offending text, when the error came from a parser.
  std::optional<std::size_t> position() const noexcept { return position_; }
  // The message without the code name and position suffix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::optional<std::size_t> position_;
  std::string detail_;
};

}  // namespace safe
