#include "lectureqg/distract.h"

#include <gtest/gtest.h>

#include <set>

#include "lectureqg/error.h"
#include "lectureqg/util.h"
#include "test_support.h"

namespace lqg {
namespace {

using testing::code_of;
using testing::FakeProvider;
using testing::ProseGenerator;
using testing::sample_lecture;

std::set<std::string> as_set(const std::vector<std::string>& v) {
  return {v.begin(), v.end()};
}

TEST(NumericAlternatives, ShapeAndOrder) {
  EXPECT_EQ(numeric_alternatives("25 years ago"),
            (std::vector<std::string>{"20 years ago", "15 years ago", "10 years ago",
                                      "30 years ago", "35 years ago", "40 years ago"}));
  EXPECT_EQ(numeric_alternatives("3 weeks"),
            (std::vector<std::string>{"8 weeks", "13 weeks", "18 weeks"}));
  EXPECT_EQ(numeric_alternatives("12"),
            (std::vector<std::string>{"7", "2", "17", "22", "27"}));
  EXPECT_TRUE(numeric_alternatives("photosynthesis").empty());
}

TEST(PhrasesOverlap, WholeWordsOnly) {
  EXPECT_TRUE(phrases_overlap("source code", "Source"));
  EXPECT_TRUE(phrases_overlap("kernel", "kernel"));
  EXPECT_FALSE(phrases_overlap("sources", "source"));
  EXPECT_FALSE(phrases_overlap("memory", "kernel"));
}

TEST(GenerateDistractors, NumericAnswer) {
  DistractorRequest req{"25 years ago", sample_lecture(), 3, 0};
  EXPECT_EQ(as_set(generate_distractors(req)),
            (std::set<std::string>{"20 years ago", "15 years ago", "10 years ago"}));
  DistractorRequest small{"3 weeks", "It took 3 weeks.", 3, 0};
  EXPECT_EQ(generate_distractors(small),
            (std::vector<std::string>{"8 weeks", "13 weeks", "18 weeks"}));
}

TEST(GenerateDistractors, SameKindCandidates) {
  DistractorRequest req{"kernel", sample_lecture(), 3, 0};
  auto out = generate_distractors(req);
  ASSERT_EQ(out.size(), 3u);
  for (const std::string& d : out) {
    EXPECT_FALSE(phrases_overlap(d, "kernel"));
    EXPECT_FALSE(find_occurrences(sample_lecture(), d).empty()) << d;
  }
}

TEST(GenerateDistractors, InsufficientWithoutProvider) {
  DistractorRequest req{"photosynthesis", "Photosynthesis.", 3, 0};
  EXPECT_EQ(code_of([&] { generate_distractors(req); }),
            ErrorCode::kInsufficientDistractors);
  DistractorRequest bad{"x", "x", 0, 0};
  EXPECT_EQ(code_of([&] { generate_distractors(bad); }), ErrorCode::kInvalidArgument);
}

TEST(GenerateDistractors, ProviderFillsTheGap) {
  FakeProvider p;
  DistractorRequest req{"photosynthesis", "Photosynthesis.", 3, 0};
  auto out = generate_distractors(req, &p);
  EXPECT_EQ(out.size(), 3u);
  EXPECT_EQ(p.calls.load(), 1);
  p.fail_with = ErrorCode::kProviderUnavailable;
  EXPECT_EQ(code_of([&] { generate_distractors(req, &p); }),
            ErrorCode::kInsufficientDistractors);
}

// Property: outputs are pairwise distinct and never overlap the answer.
TEST(GenerateDistractors, DistinctAndDisjointOnRandomProse) {
  ProseGenerator gen(5);
  FakeProvider p;
  int checked = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const std::string text = gen.paragraph(6);
    for (const KeywordCandidate& c : extract_candidates(text, 4)) {
      DistractorRequest req{c.phrase, text, 3, 0};
      auto out = generate_distractors(req, &p);
      ASSERT_EQ(out.size(), 3u);
      std::set<std::string> seen;
      for (const std::string& d : out) {
        EXPECT_TRUE(seen.insert(to_lower(d)).second) << d;
        EXPECT_FALSE(phrases_overlap(d, c.phrase)) << d << " vs " << c.phrase;
      }
      ++checked;
    }
  }
  EXPECT_GT(checked, 200);
}

}  // namespace
}  // namespace lqg
