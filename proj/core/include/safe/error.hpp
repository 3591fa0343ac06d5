#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace safe {

enum class ErrorCode {
  kIoFailure,
  kEmptyFile,
  kParseError,
  kRaggedRow,
  kNonFiniteValue,
  kDuplicateId,
  kMissingParameter,
  kUnknownParameter,
  kMalformedRule,
  kInvalidArgument,
  kUpsampleRequested,
  kDegenerateInput,
  kDimensionMismatch,
  kZeroVariance,
  kTooFewPoints,
  kTooShort,
  kUndefinedSilhouette,
  kNoValidClustering,
  kIdMismatch,
  kEmptyClusterSet,
  kEmptyImprovementSet,
  kEmptyUnsafeSet,
  kLengthMismatch,
  kEmptySample,
  kSeparabilityViolation,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace safe
