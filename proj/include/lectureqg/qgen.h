#ifndef LECTUREQG_QGEN_H_
#define LECTUREQG_QGEN_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lectureqg/provider.h"
#include "lectureqg/textkit.h"

namespace lqg {

inline constexpr int kDefaultTopN = 3;
inline constexpr int kDefaultBlqPerPolarity = 3;
// Template questions never score above this, so a confident provider
// candidate can outrank them in the shared [0,1] score space.
inline constexpr double kFallbackScoreCap = 0.9;

enum class QuestionType { kSaq, kBlq, kGfq, kMcq };
enum class QuestionSource { kFallbackBuiltin, kProvider };
enum class YesNo { kYes, kNo };

std::string_view question_type_name(QuestionType t);
QuestionType parse_question_type(std::string_view name);
std::string_view question_source_name(QuestionSource s);
QuestionSource parse_question_source(std::string_view name);
std::string_view yes_no_name(YesNo a);
// Accepts yes/no in any case. Throws InvalidArgument.
YesNo parse_yes_no(std::string_view name);

struct SaqPayload {
  std::string question_text;
  std::string answer;
};

struct BlqPayload {
  std::string question_text;
  YesNo answer = YesNo::kYes;
};

// Blanks are written "___(k)___", numbered 1..m in order of appearance.
struct GfqPayload {
  std::string gapped_text;
  std::vector<std::string> answers;
};

struct McqPayload {
  std::string question_text;
  std::string correct_answer;
  std::vector<std::string> distractors;
  // options()[i] == (correct_answer, distractors...)[option_order[i]].
  std::vector<int> option_order;

  std::vector<std::string> options() const;
};

using QuestionPayload =
    std::variant<SaqPayload, BlqPayload, GfqPayload, McqPayload>;

QuestionType payload_type(const QuestionPayload& p);

struct GeneratedQuestion {
  QuestionPayload payload;
  double confidence = 0.0;
  int rank = 0;  // 1-based within its ranked list
  QuestionSource source = QuestionSource::kFallbackBuiltin;
  bool stale = false;
};

nlohmann::json payload_to_json(const QuestionPayload& p);
QuestionPayload payload_from_json(QuestionType type, const nlohmann::json& j);

std::string gap_marker(int k);

// Ranked short-answer questions whose answer is `keyword`. Provider
// candidates (task "saq") and template questions are merged, deduplicated on
// normalized text and cut to the top n. Throws InvalidArgument (n < 1),
// KeywordNotInSegment, and provider errors.
std::vector<GeneratedQuestion> generate_saq(
    std::string_view segment_text, std::string_view keyword,
    int n = kDefaultTopN, GenerativeProvider* provider = nullptr,
    const Lexicon& lex = Lexicon::defaults());

struct BlqResult {
  std::vector<GeneratedQuestion> yes_set;
  std::vector<GeneratedQuestion> no_set;
  // Set when the summary has fewer sentences than requested per polarity.
  bool insufficient_sentences = false;
  std::vector<std::string> warnings;
};

// Throws InvalidArgument (n < 1), EmptySummary, and provider errors.
BlqResult generate_blq(std::string_view summary_text,
                       int n_per_polarity = kDefaultBlqPerPolarity,
                       GenerativeProvider* provider = nullptr,
                       const Lexicon& lex = Lexicon::defaults());

// Blanks the first free occurrence of each keyword. Throws
// KeywordNotInSummary, OverlappingKeywords, InvalidArgument.
GfqPayload generate_gfq(std::string_view summary_text,
                        const std::vector<std::string>& keywords);

// Writes the answers back into their blanks.
std::string fill_gaps(const GfqPayload& gfq);

// Checks blank numbering and answer count. Throws InvalidAnswerForType.
void validate_gfq(const GfqPayload& gfq);

// Throws InvalidArgument (n_distractors < 1) and distractor errors.
McqPayload generate_mcq(const SaqPayload& saq, std::string_view segment_text,
                        int n_distractors, uint64_t seed,
                        GenerativeProvider* provider = nullptr,
                        const Lexicon& lex = Lexicon::defaults());

// Fisher-Yates over 0..n-1 driven by a 64-bit Mersenne Twister.
std::vector<int> seeded_permutation(size_t n, uint64_t seed);

// Throws InvalidAnswerForType when options collide.
void validate_mcq(const McqPayload& mcq);

}  // namespace lqg

#endif  // LECTUREQG_QGEN_H_
