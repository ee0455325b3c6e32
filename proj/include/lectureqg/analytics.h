#ifndef LECTUREQG_ANALYTICS_H_
#define LECTUREQG_ANALYTICS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lectureqg/qgen.h"
#include "lectureqg/review.h"

namespace lqg {

struct VerdictCounts {
  int64_t good = 0;
  int64_t average = 0;
  int64_t bad = 0;

  int64_t total() const { return good + average + bad; }
  void add(Verdict v);
};

// Nearest integer percent of part/total, halves rounded up. Requires
// 0 <= part <= total and total > 0.
int round_percent(int64_t part, int64_t total);

struct TypeSummary {
  VerdictCounts counts;
  // Null when there are no ratings of this type.
  std::optional<int> good_pct;
  std::optional<int> average_pct;
  std::optional<int> bad_pct;
  std::optional<int> acceptable_pct;  // good + average
};

struct RatingSummary {
  std::map<QuestionType, TypeSummary> by_type;  // always holds all four types
};

// Counts every rating passed in. Callers wanting one vote per set pass
// effective_ratings(...).
RatingSummary summarize_ratings(const std::vector<Rating>& ratings);
RatingSummary summarize_counts(const std::map<QuestionType, VerdictCounts>& c);

struct HistogramBin {
  int64_t sets = 0;  // SAQ sets generated from keywords of this length
  VerdictCounts rated;
  int64_t unrated = 0;
};

// origin -> keyword word count -> bin.
struct KeywordLengthHistogram {
  std::map<KeywordOrigin, std::map<int, HistogramBin>> bins;
};

// Groups SAQ sets by keyword origin and word count, joined with the
// effective rating of each set.
KeywordLengthHistogram keyword_length_histogram(
    const std::vector<QuestionSet>& sets, const std::vector<Rating>& ratings);

nlohmann::json rating_summary_to_json(const RatingSummary& s);
nlohmann::json histogram_to_json(const KeywordLengthHistogram& h);

// Two CSV blocks separated by a blank line:
//   qtype,good,average,bad,total,good_pct,average_pct,bad_pct,acceptable_pct
//   origin,word_length,sets,good,average,bad,unrated
std::string analytics_to_csv(const RatingSummary& s,
                             const KeywordLengthHistogram& h);

}  // namespace lqg

#endif  // LECTUREQG_ANALYTICS_H_
