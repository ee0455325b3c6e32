#ifndef LECTUREQG_ERROR_H_
#define LECTUREQG_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace lqg {

// Every failure raised by the library carries one of these codes. The HTTP
// layer maps them onto status codes, so keep the list in sync with
// http_status_for().
enum class ErrorCode {
  kInvalidArgument,
  kMalformedDocument,
  kNonMonotonicTimestamps,
  kNotFound,
  kNoSuchVersion,
  kVersionConflict,
  kAlreadyExists,
  kPhraseNotInSegment,
  kEmptyInput,
  kProviderUnavailable,
  kProviderProtocolError,
  kKeywordNotInSegment,
  kKeywordNotInSummary,
  kOverlappingKeywords,
  kEmptySummary,
  kInsufficientDistractors,
  kInvalidAnswerForType,
  kMissingBestQuestion,
  kIoError,
};

std::string_view error_code_name(ErrorCode code);

// 400 / 404 / 409 / 502 / 500.
int http_status_for(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lqg

#endif  // LECTUREQG_ERROR_H_
