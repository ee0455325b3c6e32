#include "lectureqg/workflow.h"

#include <gtest/gtest.h>

#include "lectureqg/error.h"
#include "test_support.h"

namespace lqg {
namespace {

using testing::code_of;
using testing::FakeProvider;
using testing::sample_lecture;
using testing::synthetic_transcript;
using testing::TempDir;

class WorkflowTest : public ::testing::Test {
 protected:
  WorkflowTest() : store_(dir_.path()), wf_(store_, ApiConfig{}, nullptr) {}

  std::string ingest_sample() {
    return wf_.ingest(sample_lecture(), TranscriptFormat::kPlainText, "lec")
        .segment_ids.front();
  }

  TempDir dir_;
  Store store_;
  Workflow wf_;
};

TEST_F(WorkflowTest, IngestIsIdempotent) {
  const std::string raw = testing::timed_json(synthetic_transcript("v", 420.0));
  IngestResult a = wf_.ingest(raw, TranscriptFormat::kTimedJson);
  EXPECT_FALSE(a.already_present);
  EXPECT_EQ(a.segment_ids.size(), 2u);
  IngestResult b = wf_.ingest(raw, TranscriptFormat::kTimedJson);
  EXPECT_TRUE(b.already_present);
  EXPECT_EQ(b.segment_ids, a.segment_ids);
  const std::string other = testing::timed_json(synthetic_transcript("v", 100.0));
  EXPECT_EQ(code_of([&] { wf_.ingest(other, TranscriptFormat::kTimedJson); }),
            ErrorCode::kAlreadyExists);
  ASSERT_EQ(wf_.list_videos().size(), 1u);
  EXPECT_EQ(wf_.list_videos()[0].segment_count, 2);
}

TEST_F(WorkflowTest, EditsMarkDependentSetsStale) {
  const std::string seg = ingest_sample();
  wf_.summarize(seg, {}, "t");
  GenerateParams saq;
  saq.qtype = QuestionType::kSaq;
  saq.keyword = "kernel";
  QuestionSet s = wf_.generate(seg, saq, "t");
  GenerateParams blq;
  blq.qtype = QuestionType::kBlq;
  QuestionSet b = wf_.generate(seg, blq, "t");

  wf_.edit_segment(seg, sample_lecture() + " The kernel is small.", 1, "t");
  EXPECT_TRUE(load_question_set(store_, s.set_id).stale);
  EXPECT_FALSE(load_question_set(store_, b.set_id).stale);
  wf_.edit_summary(seg, "The kernel manages memory.", 1, "t");
  EXPECT_TRUE(load_question_set(store_, b.set_id).stale);
  EXPECT_EQ(code_of([&] { wf_.edit_segment(seg, "x", 1, "t"); }),
            ErrorCode::kVersionConflict);
}

TEST_F(WorkflowTest, SummaryRequiredForSummaryTypes) {
  const std::string seg = ingest_sample();
  GenerateParams p;
  p.qtype = QuestionType::kGfq;
  EXPECT_EQ(code_of([&] { wf_.generate(seg, p, "t"); }), ErrorCode::kNotFound);
  EXPECT_EQ(code_of([&] { wf_.summarize(seg, SummaryBackend::kProvider, "t"); }),
            ErrorCode::kProviderUnavailable);
  VersionedText v1 = wf_.summarize(seg, {}, "t");
  VersionedText v2 = wf_.summarize(seg, {}, "t");
  EXPECT_EQ(v2.head_version(), v1.head_version());
}

TEST_F(WorkflowTest, CustomKeywordsAreRecordedOnce) {
  const std::string seg = ingest_sample();
  wf_.add_custom_keyword(seg, "the freedom", "t");
  wf_.add_custom_keyword(seg, "the freedom", "t");
  KeywordListing k = wf_.keywords(seg, 5);
  EXPECT_EQ(k.custom.size(), 1u);
  EXPECT_LE(k.recommended.size(), 5u);
  GenerateParams p;
  p.qtype = QuestionType::kSaq;
  p.keyword = "the users";
  EXPECT_EQ(code_of([&] { wf_.generate(seg, p, "t"); }), ErrorCode::kPhraseNotInSegment);
  p.keyword = "the license";
  QuestionSet s = wf_.generate(seg, p, "t");
  EXPECT_EQ(s.keyword->origin, KeywordOrigin::kCustom);
  EXPECT_EQ(wf_.keywords(seg).custom.size(), 2u);
}

TEST_F(WorkflowTest, McqWrapsSaqDeterministically) {
  const std::string seg = ingest_sample();
  GenerateParams p;
  p.qtype = QuestionType::kMcq;
  p.keyword = "25 years ago";
  p.seed = 99;
  QuestionSet a = wf_.generate(seg, p, "t");
  EXPECT_FALSE(a.saq_set_id.empty());
  EXPECT_EQ(a.seed, 99u);
  GenerateParams again = p;
  again.keyword.reset();
  again.saq_set_id = a.saq_set_id;
  QuestionSet b = wf_.generate(seg, again, "t");
  ASSERT_EQ(a.questions.size(), b.questions.size());
  for (size_t i = 0; i < a.questions.size(); ++i) {
    EXPECT_EQ(std::get<McqPayload>(a.questions[i].head()).option_order,
              std::get<McqPayload>(b.questions[i].head()).option_order);
  }
}

TEST(WorkflowProvider, FailureFallsBackWithWarning) {
  TempDir dir;
  Store store(dir.path());
  FakeProvider p;
  p.fail_with = ErrorCode::kProviderUnavailable;
  Workflow wf(store, ApiConfig{}, &p);
  const std::string seg =
      wf.ingest(sample_lecture(), TranscriptFormat::kPlainText, "lec").segment_ids.front();
  GenerateParams g;
  g.qtype = QuestionType::kSaq;
  g.keyword = "kernel";
  QuestionSet s = wf.generate(seg, g, "t");
  EXPECT_FALSE(s.warnings.empty());
  EXPECT_EQ(s.questions[0].source, QuestionSource::kFallbackBuiltin);
  EXPECT_GT(p.calls.load(), 0);
}

}  // namespace
}  // namespace lqg
