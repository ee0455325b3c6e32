#include "lectureqg/util.h"

#include <gtest/gtest.h>

#include "lectureqg/error.h"

namespace lqg {
namespace {

TEST(Fnv1a, KnownVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(hex64(0xabcULL), "0000000000000abc");
}

TEST(Ids, Validation) {
  EXPECT_TRUE(is_valid_id("seg-0123_abc.v2"));
  EXPECT_FALSE(is_valid_id(""));
  EXPECT_FALSE(is_valid_id(".hidden"));
  EXPECT_FALSE(is_valid_id("a/b"));
  EXPECT_FALSE(is_valid_id(std::string(129, 'a')));
  EXPECT_TRUE(is_valid_id(std::string(128, 'a')));
  EXPECT_THROW(require_valid_id("../etc", "id"), Error);
}

TEST(Time, FormatAndParseRoundTrip) {
  TimePoint t = parse_utc("2024-03-01T12:00:00.250Z");
  EXPECT_EQ(format_utc(t), "2024-03-01T12:00:00.250Z");
  EXPECT_LT(format_utc(t), format_utc(t + std::chrono::milliseconds(1)));
}

TEST(Text, Helpers) {
  EXPECT_EQ(to_lower("Open SOURCE"), "open source");
  EXPECT_EQ(trim("  x y \n"), "x y");
  EXPECT_EQ(count_words(" open  source software "), 3);
  EXPECT_EQ(count_words(""), 0);
}

TEST(Errors, HttpMapping) {
  EXPECT_EQ(http_status_for(ErrorCode::kNotFound), 404);
  EXPECT_EQ(http_status_for(ErrorCode::kNoSuchVersion), 404);
  EXPECT_EQ(http_status_for(ErrorCode::kVersionConflict), 409);
  EXPECT_EQ(http_status_for(ErrorCode::kProviderUnavailable), 502);
  EXPECT_EQ(http_status_for(ErrorCode::kMissingBestQuestion), 400);
  EXPECT_EQ(error_code_name(ErrorCode::kVersionConflict), "VersionConflict");
}

}  // namespace
}  // namespace lqg
