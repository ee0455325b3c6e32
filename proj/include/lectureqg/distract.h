#ifndef LECTUREQG_DISTRACT_H_
#define LECTUREQG_DISTRACT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lectureqg/provider.h"
#include "lectureqg/textkit.h"

namespace lqg {

inline constexpr int kDefaultDistractorCount = 3;

struct DistractorRequest {
  std::string correct_answer;
  std::string context;  // segment text
  int n = kDefaultDistractorCount;
  // Carried for reproducibility of downstream option shuffles; the
  // distractor chain itself is deterministic.
  uint64_t seed = 0;
};

// For answers shaped "<integer> [unit words] [ago]": the answer with its
// integer replaced by m-5, m-10, m-15, m+5, m+10, m+15 (non-positive values
// skipped). Empty for any other shape.
std::vector<std::string> numeric_alternatives(std::string_view answer);

// True when either phrase occurs inside the other as whole words
// (case-insensitive), including equality.
bool phrases_overlap(std::string_view a, std::string_view b);

// Strategy chain, first applicable wins per slot:
//   1. numeric substitution (numeric_alternatives),
//   2. other keyword candidates of the segment with the answer's kind and a
//      word count within one of the answer's, by frequency,
//   3. provider task "distractors" for whatever is still missing.
// Outputs are pairwise distinct and never overlap the answer. Throws
// InvalidArgument, InsufficientDistractors.
std::vector<std::string> generate_distractors(
    const DistractorRequest& req, GenerativeProvider* provider = nullptr,
    const Lexicon& lex = Lexicon::defaults());

}  // namespace lqg

#endif  // LECTUREQG_DISTRACT_H_
