#ifndef LECTUREQG_INGEST_H_
#define LECTUREQG_INGEST_H_

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace lqg {

// Synthetic spacing for untimed (plain text) transcripts.
inline constexpr double kPlainTextSecondsPerWord = 0.4;
inline constexpr double kDefaultMaxSegmentSeconds = 300.0;

enum class WordKind { kPronunciation, kPunctuation };

struct TimedWord {
  double start_s = 0.0;
  double end_s = 0.0;
  std::string text;
  WordKind kind = WordKind::kPronunciation;

  bool operator==(const TimedWord&) const = default;
};

struct TimedTranscript {
  std::string video_id;
  std::string title;
  std::vector<TimedWord> words;
  double duration_s = 0.0;
};

enum class TranscriptFormat { kTimedJson, kPlainText };

TranscriptFormat parse_transcript_format(std::string_view name);

// A contiguous slice of the transcript. Words [word_begin, word_end) of the
// source transcript belong to this segment.
struct TranscriptSegment {
  std::string segment_id;
  std::string video_id;
  int index = 0;
  double start_s = 0.0;
  double end_s = 0.0;
  std::string text;
  size_t word_begin = 0;
  size_t word_end = 0;
};

enum class SegmentationMode { kFixedDuration, kExplicitCuts };

struct SegmentationConfig {
  double max_segment_duration_s = kDefaultMaxSegmentSeconds;
  SegmentationMode mode = SegmentationMode::kFixedDuration;
  std::vector<double> cuts_s;
};

// Parses a transcript document. For kPlainText the caller may supply the
// video id and title; when empty, the id is derived from the content hash.
// Throws Error{MalformedDocument, NonMonotonicTimestamps}.
TimedTranscript parse_transcript(std::string_view raw, TranscriptFormat format,
                                 const std::string& video_id = "",
                                 const std::string& title = "");

// Checks the TimedTranscript invariants. Throws on violation.
void validate_transcript(const TimedTranscript& t);

std::vector<TranscriptSegment> segment_transcript(const TimedTranscript& t,
                                                  const SegmentationConfig& cfg);

// Space-joined pronunciation words; punctuation attaches to the previous word.
std::string render_words(const std::vector<TimedWord>& words, size_t begin,
                         size_t end);

std::string segment_id_for(const std::string& video_id, int index);

nlohmann::json transcript_to_json(const TimedTranscript& t);

}  // namespace lqg

#endif  // LECTUREQG_INGEST_H_
