#ifndef LECTUREQG_UTIL_H_
#define LECTUREQG_UTIL_H_

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace lqg {

// 64-bit FNV-1a. Stable across platforms, used for content-addressed ids.
uint64_t fnv1a64(std::string_view data);
std::string hex64(uint64_t value);

// Ids double as file names: [A-Za-z0-9_.-], 1..128 chars, no leading dot.
bool is_valid_id(std::string_view id);
void require_valid_id(std::string_view id, std::string_view what);

// ISO-8601 UTC with millisecond precision, e.g. 2024-03-01T12:00:00.250Z.
using TimePoint = std::chrono::system_clock::time_point;
std::string format_utc(TimePoint t);
TimePoint parse_utc(const std::string& text);

// ASCII case folding; bytes >= 0x80 pass through unchanged.
std::string to_lower(std::string_view s);
bool is_word_char(char c);
std::string trim(std::string_view s);
int count_words(std::string_view s);

}  // namespace lqg

#endif  // LECTUREQG_UTIL_H_
