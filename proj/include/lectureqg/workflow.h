#ifndef LECTUREQG_WORKFLOW_H_
#define LECTUREQG_WORKFLOW_H_

#include <atomic>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lectureqg/analytics.h"
#include "lectureqg/config.h"
#include "lectureqg/ingest.h"
#include "lectureqg/provider.h"
#include "lectureqg/review.h"
#include "lectureqg/store.h"
#include "lectureqg/summarize.h"
#include "lectureqg/textkit.h"

namespace lqg {

struct IngestResult {
  std::string video_id;
  std::string title;
  std::vector<std::string> segment_ids;
  // True when the identical transcript was already stored.
  bool already_present = false;
};

struct GenerateParams {
  QuestionType qtype = QuestionType::kSaq;
  std::optional<std::string> keyword;   // SAQ, MCQ
  std::vector<std::string> keywords;    // GFQ; empty picks recommended ones
  std::optional<int> n;                 // top-N, per polarity for BLQ,
                                        // distractor count for MCQ
  std::optional<uint64_t> seed;         // MCQ option shuffles
  std::optional<std::string> saq_set_id;  // MCQ: wrap an existing SAQ set
};

struct KeywordListing {
  std::vector<KeywordCandidate> recommended;
  std::vector<KeywordCandidate> custom;
};

// The five-phase pipeline over one store: ingest, inspect and edit the
// transcript, summarize, pick keywords, generate and review questions.
// Thread-safe; every write goes through the store's compare-and-set.
class Workflow {
 public:
  // `provider` may be null; it must outlive the workflow.
  Workflow(Store& store, ApiConfig cfg, GenerativeProvider* provider,
           const Lexicon& lex = Lexicon::defaults());

  Store& store() { return store_; }
  const ApiConfig& config() const { return cfg_; }
  bool has_provider() const { return provider_ != nullptr; }

  // Throws MalformedDocument, NonMonotonicTimestamps, AlreadyExists (same
  // video id, different transcript).
  IngestResult ingest(std::string_view raw, TranscriptFormat format,
                      const std::string& video_id = "",
                      const std::string& title = "",
                      const std::string& author = "ingest");

  std::vector<VideoListing> list_videos() const;
  nlohmann::json list_segments(const std::string& video_id) const;
  nlohmann::json segment_document(const std::string& segment_id,
                                  int version = kLatest) const;

  // Marks SAQ and MCQ sets built on older text as stale.
  VersionedText edit_segment(const std::string& segment_id,
                             const std::string& text, int expected_version,
                             const std::string& author);
  VersionedText segment_history(const std::string& segment_id) const;

  // Creates or appends a summary version. `backend` defaults to the config.
  // Provider failures surface as errors; the caller may retry with the
  // extractive backend. Marks BLQ and GFQ sets on older summaries stale.
  VersionedText summarize(const std::string& segment_id,
                          std::optional<SummaryBackend> backend,
                          const std::string& author);
  VersionedText edit_summary(const std::string& segment_id,
                             const std::string& text, int expected_version,
                             const std::string& author);
  nlohmann::json summary_document(const std::string& segment_id,
                                  int version = kLatest) const;

  KeywordListing keywords(const std::string& segment_id,
                          std::optional<int> limit = {}) const;
  // Idempotent for a phrase that is already listed. Throws
  // PhraseNotInSegment, InvalidArgument.
  KeywordCandidate add_custom_keyword(const std::string& segment_id,
                                      const std::string& phrase,
                                      const std::string& author);

  // Provider errors during question generation fall back to built-in
  // generators and add a warning to the set.
  QuestionSet generate(const std::string& segment_id,
                       const GenerateParams& params,
                       const std::string& author);

  std::vector<QuestionSet> question_sets(const std::string& segment_id) const;

  RatingSummary rating_summary() const;
  KeywordLengthHistogram keyword_histogram() const;

 private:
  KeywordRef resolve_keyword(const std::string& segment_id,
                             const std::string& segment_text,
                             const std::string& phrase,
                             const std::string& author);
  void mark_stale(const std::string& segment_id,
                  std::initializer_list<QuestionType> types, int fresh_version);
  std::string new_set_id(const std::string& segment_id, QuestionType t);
  std::string segment_text(const std::string& segment_id) const;

  Store& store_;
  ApiConfig cfg_;
  GenerativeProvider* provider_;
  const Lexicon& lex_;
  std::atomic<uint64_t> counter_{0};
};

}  // namespace lqg

#endif  // LECTUREQG_WORKFLOW_H_
