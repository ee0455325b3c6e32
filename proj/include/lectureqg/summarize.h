#ifndef LECTUREQG_SUMMARIZE_H_
#define LECTUREQG_SUMMARIZE_H_

#include <string>
#include <string_view>
#include <vector>

#include "lectureqg/provider.h"
#include "lectureqg/textkit.h"

namespace lqg {

inline constexpr double kDefaultSummaryRatio = 0.2;
inline constexpr int kDefaultSummaryMaxWords = 100;

enum class SummaryBackend { kExtractiveBuiltin, kProvider };

std::string_view summary_backend_name(SummaryBackend backend);
SummaryBackend parse_summary_backend(std::string_view name);

struct ScoredSentence {
  Sentence sentence;
  double score = 0.0;
  int word_count = 0;
};

// Scores every sentence as the sum of its content words' segment-wide
// frequencies divided by the sentence's word count. Content words are word
// tokens outside the stopword list, compared case-insensitively.
std::vector<ScoredSentence> score_sentences(
    std::string_view text, const Lexicon& lex = Lexicon::defaults());

// Picks the top ceil(ratio * n) sentences (at least one, ties broken by
// position), drops trailing picks while over max_words, and returns them in
// source order joined by single spaces. Throws EmptyInput, InvalidArgument.
std::string summarize_extractive(std::string_view segment_text,
                                 double ratio = kDefaultSummaryRatio,
                                 int max_words = kDefaultSummaryMaxWords,
                                 const Lexicon& lex = Lexicon::defaults());

// Top provider candidate for task "summarize". Throws EmptyInput,
// ProviderUnavailable, ProviderProtocolError.
std::string summarize_via_provider(std::string_view segment_text,
                                   GenerativeProvider& provider);

}  // namespace lqg

#endif  // LECTUREQG_SUMMARIZE_H_
