#include "lectureqg/distract.h"

#include <cctype>
#include <regex>

#include "lectureqg/error.h"
#include "lectureqg/util.h"

namespace lqg {

namespace {

const std::regex& numeric_shape() {
  static const std::regex re(R"(^(\d{1,9})((?: [A-Za-z][A-Za-z'-]*)*)$)");
  return re;
}

class Collector {
 public:
  Collector(std::string answer, int want)
      : answer_(std::move(answer)), want_(want) {}

  bool full() const { return static_cast<int>(out_.size()) >= want_; }
  int missing() const { return want_ - static_cast<int>(out_.size()); }

  void offer(const std::string& raw) {
    if (full()) return;
    std::string c = trim(raw);
    if (c.empty() || phrases_overlap(c, answer_)) return;
    std::string key = to_lower(c);
    for (const std::string& o : out_) {
      if (to_lower(o) == key) return;
    }
    out_.push_back(std::move(c));
  }

  std::vector<std::string> take() { return std::move(out_); }

 private:
  std::string answer_;
  int want_;
  std::vector<std::string> out_;
};

}  // namespace

std::vector<std::string> numeric_alternatives(std::string_view answer) {
  std::string a = trim(answer);
  std::smatch m;
  if (!std::regex_match(a, m, numeric_shape())) return {};
  const long value = std::stol(m[1].str());
  const std::string tail = m[2].str();
  std::vector<std::string> out;
  for (long delta : {-5L, -10L, -15L, 5L, 10L, 15L}) {
    long v = value + delta;
    if (v <= 0) continue;
    out.push_back(std::to_string(v) + tail);
  }
  return out;
}

bool phrases_overlap(std::string_view a, std::string_view b) {
  std::string ta = trim(a);
  std::string tb = trim(b);
  if (ta.empty() || tb.empty()) return false;
  return !find_occurrences(ta, tb).empty() || !find_occurrences(tb, ta).empty();
}

std::vector<std::string> generate_distractors(const DistractorRequest& req,
                                              GenerativeProvider* provider,
                                              const Lexicon& lex) {
  if (req.n < 1) {
    throw Error(ErrorCode::kInvalidArgument, "distractor count must be >= 1");
  }
  const std::string answer = trim(req.correct_answer);
  if (answer.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "correct answer is empty");
  }

  Collector picked(answer, req.n);
  for (const std::string& alt : numeric_alternatives(answer)) picked.offer(alt);

  if (!picked.full()) {
    std::vector<KeywordCandidate> candidates =
        extract_candidates(req.context, 0, lex);
    const std::string key = to_lower(answer);
    CandidateKind kind = classify_phrase(answer, lex);
    for (const KeywordCandidate& c : candidates) {
      if (to_lower(c.phrase) == key) {
        kind = c.kind;
        break;
      }
    }
    const int length = count_words(answer);
    for (const KeywordCandidate& c : candidates) {
      if (c.kind != kind) continue;
      if (std::abs(count_words(c.phrase) - length) > 1) continue;
      picked.offer(c.phrase);
    }
  }

  std::string provider_note;
  if (!picked.full() && provider != nullptr) {
    GenerateRequest gr;
    gr.task = ProviderTask::kDistractors;
    gr.text = req.context;
    gr.answer = answer;
    gr.n = picked.missing();
    try {
      for (const ProviderCandidate& c : provider->generate(gr).candidates) {
        picked.offer(c.text);
      }
    } catch (const Error& e) {
      provider_note = std::string("; provider: ") + e.what();
    }
  }

  if (!picked.full()) {
    throw Error(ErrorCode::kInsufficientDistractors,
                "only " + std::to_string(req.n - picked.missing()) + " of " +
                    std::to_string(req.n) + " distractors for '" + answer +
                    "'" + provider_note);
  }
  return picked.take();
}

}  // namespace lqg
