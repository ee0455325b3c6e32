#include "lectureqg/summarize.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "lectureqg/error.h"
#include "lectureqg/util.h"

namespace lqg {

namespace {

bool is_word_token(const Token& t) {
  return std::any_of(t.text.begin(), t.text.end(), is_word_char);
}

}  // namespace

std::string_view summary_backend_name(SummaryBackend backend) {
  return backend == SummaryBackend::kExtractiveBuiltin ? "extractive_builtin"
                                                       : "provider";
}

SummaryBackend parse_summary_backend(std::string_view name) {
  if (name == "extractive_builtin" || name == "extractive") {
    return SummaryBackend::kExtractiveBuiltin;
  }
  if (name == "provider") return SummaryBackend::kProvider;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown summary backend '" + std::string(name) + "'");
}

std::vector<ScoredSentence> score_sentences(std::string_view text,
                                            const Lexicon& lex) {
  std::vector<Sentence> sentences = split_sentences(text, lex);
  std::vector<std::vector<std::string>> words(sentences.size());
  std::unordered_map<std::string, int> freq;
  for (size_t i = 0; i < sentences.size(); ++i) {
    for (const Token& t : tokenize(sentences[i].text, lex)) {
      if (!is_word_token(t)) continue;
      std::string lower = to_lower(t.text);
      if (!lex.is_stopword(lower)) ++freq[lower];
      words[i].push_back(std::move(lower));
    }
  }

  std::vector<ScoredSentence> out;
  out.reserve(sentences.size());
  for (size_t i = 0; i < sentences.size(); ++i) {
    ScoredSentence s;
    s.sentence = sentences[i];
    s.word_count = static_cast<int>(words[i].size());
    long total = 0;
    for (const std::string& w : words[i]) {
      auto it = freq.find(w);
      if (it != freq.end()) total += it->second;
    }
    s.score = s.word_count == 0 ? 0.0
                                : static_cast<double>(total) / s.word_count;
    out.push_back(std::move(s));
  }
  return out;
}

std::string summarize_extractive(std::string_view segment_text, double ratio,
                                 int max_words, const Lexicon& lex) {
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "ratio must be in (0, 1]");
  }
  if (max_words < 1) {
    throw Error(ErrorCode::kInvalidArgument, "max_words must be >= 1");
  }
  std::vector<ScoredSentence> scored = score_sentences(segment_text, lex);
  if (scored.empty()) {
    throw Error(ErrorCode::kEmptyInput, "segment has no sentences");
  }

  const size_t n = scored.size();
  auto want = static_cast<size_t>(std::ceil(ratio * static_cast<double>(n) - 1e-9));
  want = std::clamp<size_t>(want, 1, n);

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return scored[a].score > scored[b].score;
  });
  order.resize(want);
  std::sort(order.begin(), order.end());

  int total = 0;
  for (size_t i : order) total += scored[i].word_count;
  while (order.size() > 1 && total > max_words) {
    total -= scored[order.back()].word_count;
    order.pop_back();
  }

  std::string out;
  for (size_t i : order) {
    if (!out.empty()) out += ' ';
    out += scored[i].sentence.text;
  }
  return out;
}

std::string summarize_via_provider(std::string_view segment_text,
                                   GenerativeProvider& provider) {
  if (trim(segment_text).empty()) {
    throw Error(ErrorCode::kEmptyInput, "segment is empty");
  }
  GenerateRequest req;
  req.task = ProviderTask::kSummarize;
  req.text = std::string(segment_text);
  req.n = 1;
  GenerateResponse resp = provider.generate(req);
  if (resp.candidates.empty() || trim(resp.candidates.front().text).empty()) {
    throw Error(ErrorCode::kProviderProtocolError,
                "provider returned no summary text");
  }
  return resp.candidates.front().text;
}

}  // namespace lqg
