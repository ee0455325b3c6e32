#ifndef LECTUREQG_REVIEW_H_
#define LECTUREQG_REVIEW_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lectureqg/qgen.h"
#include "lectureqg/store.h"
#include "lectureqg/textkit.h"

namespace lqg {

enum class QuestionStatus { kGenerated, kEdited, kAccepted, kDiscarded };
enum class Verdict { kGood, kAverage, kBad };

std::string_view question_status_name(QuestionStatus s);
QuestionStatus parse_question_status(std::string_view name);
std::string_view verdict_name(Verdict v);
// Case-insensitive. Throws InvalidArgument.
Verdict parse_verdict(std::string_view name);

struct QuestionVersion {
  int version_no = 0;
  QuestionPayload payload;
  std::string edited_at;
  std::string author;
};

struct QuestionEntry {
  int rank = 0;  // 1-based position within the set
  double confidence = 0.0;
  QuestionSource source = QuestionSource::kFallbackBuiltin;
  QuestionStatus status = QuestionStatus::kGenerated;
  // BLQ sets hold a yes-group and a no-group; empty for other types.
  std::string group;
  std::vector<QuestionVersion> versions;  // versions[0] is machine output

  const QuestionPayload& head() const { return versions.back().payload; }
};

struct KeywordRef {
  std::string phrase;
  KeywordOrigin origin = KeywordOrigin::kRecommended;
};

// One generation run: the ranked questions of one type for one segment.
struct QuestionSet {
  std::string set_id;
  std::string segment_id;
  std::string video_id;
  QuestionType qtype = QuestionType::kSaq;
  std::optional<KeywordRef> keyword;  // SAQ / MCQ
  std::vector<KeywordRef> keywords;   // GFQ blanks
  int segment_version = 0;
  int summary_version = 0;  // BLQ / GFQ only
  uint64_t seed = 0;
  std::string saq_set_id;  // MCQ: the SAQ set it wraps
  bool stale = false;
  std::vector<std::string> warnings;
  std::string created_at;
  std::vector<QuestionEntry> questions;
  int64_t revision = 0;

  // Throws NotFound.
  const QuestionEntry& at_rank(int rank) const;
};

nlohmann::json question_set_to_json(const QuestionSet& s);
QuestionSet question_set_from_json(const nlohmann::json& j);

// Builds a set from generator output, every question at version 1 with
// status generated.
QuestionSet make_question_set(std::string set_id, std::string segment_id,
                              std::string video_id, QuestionType qtype,
                              const std::vector<GeneratedQuestion>& ranked,
                              const std::string& author, TimePoint now);

void save_question_set(Store& store, QuestionSet& set);
// Throws NotFound.
QuestionSet load_question_set(const Store& store, const std::string& set_id);
std::vector<QuestionSet> list_question_sets(const Store& store);

// Fields left empty keep their current value. `text` is the question text,
// or the gapped text for GFQ. `answer` is the SAQ/MCQ answer or the BLQ key.
struct QuestionEdit {
  std::optional<std::string> text;
  std::optional<std::string> answer;
  std::optional<std::vector<std::string>> answers;      // GFQ
  std::optional<std::vector<std::string>> distractors;  // MCQ
};

struct EditResult {
  QuestionSet set;
  std::vector<std::string> warnings;
};

// Appends a version to the question at `rank`. Status becomes edited unless
// the question was already accepted. Resending the current head is a no-op.
// Throws NotFound, InvalidAnswerForType, InvalidArgument, VersionConflict.
EditResult edit_question(Store& store, const std::string& set_id, int rank,
                         const QuestionEdit& edit, const std::string& author,
                         std::optional<int64_t> expected_revision = {});

QuestionSet accept_questions(Store& store, const std::string& set_id,
                             const std::vector<int>& ranks,
                             const std::string& author);
QuestionSet discard_questions(Store& store, const std::string& set_id,
                              const std::vector<int>& ranks,
                              const std::string& author);

struct Rating {
  std::string rating_id;
  std::string question_set_id;
  QuestionType qtype = QuestionType::kSaq;
  Verdict verdict = Verdict::kGood;
  std::optional<int> best_question_rank;
  std::string rater;
  std::string rated_at;
  std::optional<std::string> supersedes;
  std::string segment_id;
  // GFQ ratings judge the summary the gaps were cut from.
  std::optional<int> summary_version;
  std::optional<KeywordRef> keyword;
};

nlohmann::json rating_to_json(const Rating& r);
Rating rating_from_json(const nlohmann::json& j);

// Ratings are immutable. A correction is a new rating naming the one it
// supersedes. Throws NotFound, MissingBestQuestion (Good without a best
// question on an SAQ or MCQ set), InvalidArgument (best rank on a non-Good
// verdict or out of range).
Rating rate_question_set(Store& store, const std::string& set_id,
                         Verdict verdict, std::optional<int> best_rank,
                         const std::string& rater,
                         std::optional<std::string> supersedes = {});

std::vector<Rating> list_ratings(const Store& store);
// Latest rating per set by rated_at, ties broken by rating id.
std::vector<Rating> effective_ratings(const std::vector<Rating>& all);
std::optional<Rating> effective_rating(const Store& store,
                                       const std::string& set_id);

// Accepted questions of a segment, in set creation order then rank.
nlohmann::json export_segment(const Store& store,
                              const std::string& segment_id);

}  // namespace lqg

#endif  // LECTUREQG_REVIEW_H_
