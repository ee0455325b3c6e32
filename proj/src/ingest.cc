#include "lectureqg/ingest.h"

#include <algorithm>
#include <cctype>
#include <cmath>

#include <nlohmann/json.hpp>

#include "lectureqg/error.h"
#include "lectureqg/util.h"

namespace lqg {

using json = nlohmann::json;

namespace {

bool is_trailing_punct(char c) {
  return c == '.' || c == ',' || c == '!' || c == '?' || c == ';' || c == ':';
}

[[noreturn]] void malformed(const std::string& why) {
  throw Error(ErrorCode::kMalformedDocument, "malformed transcript: " + why);
}

double number_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number()) {
    malformed(std::string("missing numeric field '") + key + "'");
  }
  double v = it->get<double>();
  if (!std::isfinite(v)) malformed(std::string("non-finite '") + key + "'");
  return v;
}

std::string string_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string()) {
    malformed(std::string("missing string field '") + key + "'");
  }
  return it->get<std::string>();
}

TimedTranscript parse_timed_json(std::string_view raw) {
  json doc = json::parse(raw.begin(), raw.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) malformed("not a JSON object");

  TimedTranscript t;
  t.video_id = string_field(doc, "video_id");
  if (!is_valid_id(t.video_id)) malformed("invalid video_id");
  t.title = string_field(doc, "title");
  t.duration_s = number_field(doc, "duration_s");
  if (t.duration_s < 0) malformed("negative duration_s");

  auto items = doc.find("items");
  if (items == doc.end() || !items->is_array()) malformed("missing items");
  t.words.reserve(items->size());
  for (const json& item : *items) {
    if (!item.is_object()) malformed("item is not an object");
    TimedWord w;
    w.start_s = number_field(item, "start_s");
    w.end_s = number_field(item, "end_s");
    w.text = string_field(item, "text");
    std::string kind = string_field(item, "kind");
    if (kind == "pronunciation") {
      w.kind = WordKind::kPronunciation;
    } else if (kind == "punctuation") {
      w.kind = WordKind::kPunctuation;
      // Punctuation never carries duration.
      w.end_s = w.start_s;
    } else {
      malformed("unknown item kind '" + kind + "'");
    }
    t.words.push_back(std::move(w));
  }
  validate_transcript(t);
  return t;
}

TimedTranscript parse_plain_text(std::string_view raw,
                                 const std::string& video_id,
                                 const std::string& title) {
  TimedTranscript t;
  t.video_id = video_id.empty() ? "txt-" + hex64(fnv1a64(raw)) : video_id;
  if (!is_valid_id(t.video_id)) malformed("invalid video_id");
  t.title = title.empty() ? t.video_id : title;

  int spoken = 0;
  size_t i = 0;
  while (i < raw.size()) {
    while (i < raw.size() && std::isspace(static_cast<unsigned char>(raw[i]))) {
      ++i;
    }
    size_t b = i;
    while (i < raw.size() && !std::isspace(static_cast<unsigned char>(raw[i]))) {
      ++i;
    }
    if (b == i) break;
    std::string_view chunk = raw.substr(b, i - b);
    size_t cut = chunk.size();
    while (cut > 0 && is_trailing_punct(chunk[cut - 1])) --cut;
    if (cut > 0) {
      TimedWord w;
      w.start_s = spoken * kPlainTextSecondsPerWord;
      w.end_s = (spoken + 1) * kPlainTextSecondsPerWord;
      w.text = std::string(chunk.substr(0, cut));
      t.words.push_back(std::move(w));
      ++spoken;
    }
    if (cut < chunk.size()) {
      TimedWord p;
      p.start_s = p.end_s = spoken * kPlainTextSecondsPerWord;
      p.text = std::string(chunk.substr(cut));
      p.kind = WordKind::kPunctuation;
      t.words.push_back(std::move(p));
    }
  }
  t.duration_s = spoken * kPlainTextSecondsPerWord;
  return t;
}

}  // namespace

TranscriptFormat parse_transcript_format(std::string_view name) {
  if (name == "timed_json") return TranscriptFormat::kTimedJson;
  if (name == "plain_text") return TranscriptFormat::kPlainText;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown transcript format '" + std::string(name) + "'");
}

TimedTranscript parse_transcript(std::string_view raw, TranscriptFormat format,
                                 const std::string& video_id,
                                 const std::string& title) {
  if (format == TranscriptFormat::kTimedJson) return parse_timed_json(raw);
  return parse_plain_text(raw, video_id, title);
}

void validate_transcript(const TimedTranscript& t) {
  if (t.words.empty() && t.duration_s != 0.0) {
    malformed("transcript has no items but a positive duration");
  }
  double prev_start = 0.0;
  for (size_t i = 0; i < t.words.size(); ++i) {
    const TimedWord& w = t.words[i];
    if (w.start_s < 0 || w.end_s < w.start_s) {
      malformed("item " + std::to_string(i) + " has an invalid time range");
    }
    if (w.text.empty()) malformed("item " + std::to_string(i) + " is empty");
    if (i > 0 && w.start_s < prev_start) {
      throw Error(ErrorCode::kNonMonotonicTimestamps,
                  "item " + std::to_string(i) + " starts before item " +
                      std::to_string(i - 1));
    }
    prev_start = w.start_s;
    if (w.end_s > t.duration_s) {
      malformed("item " + std::to_string(i) + " ends after duration_s");
    }
  }
}

std::string render_words(const std::vector<TimedWord>& words, size_t begin,
                         size_t end) {
  std::string out;
  for (size_t i = begin; i < end; ++i) {
    const TimedWord& w = words[i];
    if (w.kind == WordKind::kPronunciation && !out.empty()) out += ' ';
    out += w.text;
  }
  return out;
}

std::string segment_id_for(const std::string& video_id, int index) {
  std::string key = video_id;
  key += '\x1f';
  key += std::to_string(index);
  return "seg-" + hex64(fnv1a64(key));
}

std::vector<TranscriptSegment> segment_transcript(
    const TimedTranscript& t, const SegmentationConfig& cfg) {
  validate_transcript(t);
  if (t.duration_s == 0.0) return {};

  std::vector<double> boundaries;
  if (cfg.mode == SegmentationMode::kFixedDuration) {
    const double d = cfg.max_segment_duration_s;
    if (!(d > 0) || !std::isfinite(d)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "max_segment_duration_s must be positive");
    }
    // Tolerate representation noise so 600 / 300 yields two windows.
    auto count = static_cast<int64_t>(std::ceil(t.duration_s / d - 1e-9));
    count = std::max<int64_t>(count, 1);
    for (int64_t k = 1; k < count; ++k) boundaries.push_back(k * d);
  } else {
    double prev = 0.0;
    for (double c : cfg.cuts_s) {
      if (!(c > prev) || !(c < t.duration_s)) {
        throw Error(ErrorCode::kInvalidArgument,
                    "cuts_s must be strictly increasing within (0, duration)");
      }
      prev = c;
    }
    boundaries = cfg.cuts_s;
  }

  const size_t n_segments = boundaries.size() + 1;
  // Segment index per word: the number of boundaries strictly before its
  // end time, never decreasing along the transcript.
  std::vector<size_t> owner(t.words.size(), 0);
  size_t current = 0;
  for (size_t i = 0; i < t.words.size(); ++i) {
    const TimedWord& w = t.words[i];
    if (w.kind == WordKind::kPronunciation) {
      size_t k = static_cast<size_t>(
          std::lower_bound(boundaries.begin(), boundaries.end(), w.end_s) -
          boundaries.begin());
      current = std::max(current, k);
    }
    owner[i] = current;
  }

  std::vector<TranscriptSegment> segments(n_segments);
  size_t cursor = 0;
  for (size_t k = 0; k < n_segments; ++k) {
    TranscriptSegment& s = segments[k];
    s.video_id = t.video_id;
    s.index = static_cast<int>(k);
    s.segment_id = segment_id_for(t.video_id, s.index);
    s.start_s = k == 0 ? 0.0 : boundaries[k - 1];
    s.end_s = k + 1 == n_segments ? t.duration_s : boundaries[k];
    s.word_begin = cursor;
    while (cursor < owner.size() && owner[cursor] == k) ++cursor;
    s.word_end = cursor;
    s.text = render_words(t.words, s.word_begin, s.word_end);
  }
  return segments;
}

json transcript_to_json(const TimedTranscript& t) {
  json items = json::array();
  for (const TimedWord& w : t.words) {
    items.push_back({{"start_s", w.start_s},
                     {"end_s", w.end_s},
                     {"text", w.text},
                     {"kind", w.kind == WordKind::kPronunciation
                                  ? "pronunciation"
                                  : "punctuation"}});
  }
  return {{"video_id", t.video_id},
          {"title", t.title},
          {"duration_s", t.duration_s},
          {"items", std::move(items)}};
}

}  // namespace lqg
