#include "lectureqg/error.h"

namespace lqg {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kMalformedDocument: return "MalformedDocument";
    case ErrorCode::kNonMonotonicTimestamps: return "NonMonotonicTimestamps";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kNoSuchVersion: return "NoSuchVersion";
    case ErrorCode::kVersionConflict: return "VersionConflict";
    case ErrorCode::kAlreadyExists: return "AlreadyExists";
    case ErrorCode::kPhraseNotInSegment: return "PhraseNotInSegment";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kProviderUnavailable: return "ProviderUnavailable";
    case ErrorCode::kProviderProtocolError: return "ProviderProtocolError";
    case ErrorCode::kKeywordNotInSegment: return "KeywordNotInSegment";
    case ErrorCode::kKeywordNotInSummary: return "KeywordNotInSummary";
    case ErrorCode::kOverlappingKeywords: return "OverlappingKeywords";
    case ErrorCode::kEmptySummary: return "EmptySummary";
    case ErrorCode::kInsufficientDistractors: return "InsufficientDistractors";
    case ErrorCode::kInvalidAnswerForType: return "InvalidAnswerForType";
    case ErrorCode::kMissingBestQuestion: return "MissingBestQuestion";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

int http_status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound:
    case ErrorCode::kNoSuchVersion:
      return 404;
    case ErrorCode::kVersionConflict:
    case ErrorCode::kAlreadyExists:
      return 409;
    case ErrorCode::kProviderUnavailable:
    case ErrorCode::kProviderProtocolError:
      return 502;
    case ErrorCode::kIoError:
      return 500;
    default:
      return 400;
  }
}

}  // namespace lqg
