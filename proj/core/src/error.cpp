#include "safe/error.hpp"

namespace safe {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kEmptyFile: return "EmptyFile";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kRaggedRow: return "RaggedRow";
    case ErrorCode::kNonFiniteValue: return "NonFiniteValue";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kMissingParameter: return "MissingParameter";
    case ErrorCode::kUnknownParameter: return "UnknownParameter";
    case ErrorCode::kMalformedRule: return "MalformedRule";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kUpsampleRequested: return "UpsampleRequested";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kZeroVariance: return "ZeroVariance";
    case ErrorCode::kTooFewPoints: return "TooFewPoints";
    case ErrorCode::kTooShort: return "TooShort";
    case ErrorCode::kUndefinedSilhouette: return "UndefinedSilhouette";
    case ErrorCode::kNoValidClustering: return "NoValidClustering";
    case ErrorCode::kIdMismatch: return "IdMismatch";
    case ErrorCode::kEmptyClusterSet: return "EmptyClusterSet";
    case ErrorCode::kEmptyImprovementSet: return "EmptyImprovementSet";
    case ErrorCode::kEmptyUnsafeSet: return "EmptyUnsafeSet";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmptySample: return "EmptySample";
    case ErrorCode::kSeparabilityViolation: return "SeparabilityViolation";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace safe
