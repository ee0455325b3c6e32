#include "lectureqg/qgen.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "lectureqg/error.h"
#include "lectureqg/util.h"
#include "test_support.h"

namespace lqg {
namespace {

using testing::code_of;
using testing::FakeProvider;
using testing::ProseGenerator;
using testing::sample_lecture;

const std::string& text_of(const GeneratedQuestion& q) {
  if (auto* s = std::get_if<SaqPayload>(&q.payload)) return s->question_text;
  return std::get<BlqPayload>(q.payload).question_text;
}

bool ends_with_question_mark(const std::string& s) {
  return !s.empty() && s.back() == '?';
}

void expect_ranked(const std::vector<GeneratedQuestion>& qs) {
  for (size_t i = 0; i < qs.size(); ++i) {
    EXPECT_EQ(qs[i].rank, static_cast<int>(i + 1));
    if (i > 0) {
      EXPECT_GE(qs[i - 1].confidence, qs[i].confidence);
    }
    EXPECT_TRUE(ends_with_question_mark(text_of(qs[i]))) << text_of(qs[i]);
  }
}

TEST(Names, RoundTrip) {
  for (QuestionType t : {QuestionType::kSaq, QuestionType::kBlq, QuestionType::kGfq,
                         QuestionType::kMcq}) {
    EXPECT_EQ(parse_question_type(question_type_name(t)), t);
  }
  EXPECT_EQ(parse_yes_no("YES"), YesNo::kYes);
  EXPECT_EQ(code_of([] { parse_yes_no("maybe"); }), ErrorCode::kInvalidArgument);
}

TEST(Saq, TemplatesForCommonAnswerShapes) {
  auto first = [](std::string_view kw) {
    return std::get<SaqPayload>(generate_saq(sample_lecture(), kw).front().payload);
  };
  EXPECT_EQ(first("Dr. Smith").question_text, "Who teaches the course on Mondays?");
  EXPECT_EQ(first("kernel").question_text, "What manages memory and processes?");
  EXPECT_EQ(first("12 lectures").question_text, "How many lectures does the course have?");
  EXPECT_EQ(first("25 years ago").question_text.rfind("When ", 0), 0u);
  EXPECT_EQ(first("kernel").answer, "kernel");
}

TEST(Saq, TopThreeNonIncreasing) {
  auto qs = generate_saq(sample_lecture(), "course");
  ASSERT_FALSE(qs.empty());
  EXPECT_LE(qs.size(), 3u);
  expect_ranked(qs);
  EXPECT_EQ(generate_saq(sample_lecture(), "course", 1).size(), 1u);
}

TEST(Saq, Errors) {
  EXPECT_EQ(code_of([] { generate_saq(sample_lecture(), "quantum"); }),
            ErrorCode::kKeywordNotInSegment);
  EXPECT_EQ(code_of([] { generate_saq(sample_lecture(), "kernel", 0); }),
            ErrorCode::kInvalidArgument);
}

TEST(Saq, ProviderCandidatesMergeIntoRanking) {
  FakeProvider p;
  auto qs = generate_saq(sample_lecture(), "kernel", 3, &p);
  ASSERT_EQ(qs.size(), 3u);
  EXPECT_EQ(qs[0].source, QuestionSource::kProvider);
  expect_ranked(qs);
  std::set<std::string> texts;
  for (const auto& q : qs) EXPECT_TRUE(texts.insert(to_lower(text_of(q))).second);
}

// Property: across random prose and every extracted keyword, SAQ output is
// at most n, ranked, and answers the keyword.
TEST(Saq, RankedOnRandomProse) {
  ProseGenerator gen(3);
  for (int trial = 0; trial < 60; ++trial) {
    const std::string text = gen.paragraph(5);
    for (const KeywordCandidate& c : extract_candidates(text, 5)) {
      auto qs = generate_saq(text, c.phrase);
      ASSERT_FALSE(qs.empty()) << c.phrase;
      EXPECT_LE(qs.size(), 3u);
      expect_ranked(qs);
      for (const auto& q : qs) EXPECT_EQ(std::get<SaqPayload>(q.payload).answer, c.phrase);
    }
  }
}

TEST(Blq, CopulaFronting) {
  BlqResult r = generate_blq("Grass is green.");
  ASSERT_EQ(r.yes_set.size(), 1u);
  ASSERT_EQ(r.no_set.size(), 1u);
  EXPECT_EQ(std::get<BlqPayload>(r.yes_set[0].payload).question_text, "Is grass green?");
  EXPECT_EQ(std::get<BlqPayload>(r.yes_set[0].payload).answer, YesNo::kYes);
  EXPECT_EQ(std::get<BlqPayload>(r.no_set[0].payload).answer, YesNo::kNo);
  EXPECT_TRUE(r.insufficient_sentences);
  EXPECT_FALSE(r.warnings.empty());
}

TEST(Blq, ThreePerPolarity) {
  BlqResult r = generate_blq(sample_lecture());
  EXPECT_EQ(r.yes_set.size(), 3u);
  EXPECT_EQ(r.no_set.size(), 3u);
  EXPECT_FALSE(r.insufficient_sentences);
  expect_ranked(r.yes_set);
  expect_ranked(r.no_set);
  EXPECT_EQ(text_of(r.yes_set[0]), "Do many companies contribute to open source software?");
}

TEST(Blq, NoSetAltersTheStatement) {
  BlqResult r = generate_blq("The course has 12 lectures. Linus Torvalds created the kernel.");
  std::set<std::string> yes;
  for (const auto& q : r.yes_set) yes.insert(text_of(q));
  for (const auto& q : r.no_set) EXPECT_EQ(yes.count(text_of(q)), 0u) << text_of(q);
  EXPECT_EQ(text_of(r.no_set[0]).find("12"), std::string::npos);
}

TEST(Blq, Errors) {
  EXPECT_EQ(code_of([] { generate_blq("   "); }), ErrorCode::kEmptySummary);
  EXPECT_EQ(code_of([] { generate_blq("Grass is green.", 0); }),
            ErrorCode::kInvalidArgument);
}

// Property: summaries with at least three distinct sentences always give
// exactly three questions per polarity, each ending in '?'.
TEST(Blq, CardinalityOnRandomProse) {
  ProseGenerator gen(17);
  for (int trial = 0; trial < 150; ++trial) {
    BlqResult r = generate_blq(gen.paragraph(3 + trial % 4));
    ASSERT_EQ(r.yes_set.size(), 3u);
    ASSERT_EQ(r.no_set.size(), 3u);
    expect_ranked(r.yes_set);
    expect_ranked(r.no_set);
  }
}

TEST(Gfq, ThreeGapsInTextOrder) {
  GfqPayload g = generate_gfq(sample_lecture(), {"12 lectures", "Linus Torvalds", "kernel"});
  EXPECT_EQ(g.answers, (std::vector<std::string>{"Linus Torvalds", "kernel", "12 lectures"}));
  EXPECT_NE(g.gapped_text.find("by ___(1)___."), std::string::npos);
  EXPECT_NE(g.gapped_text.find("The ___(2)___ manages"), std::string::npos);
  EXPECT_NE(g.gapped_text.find("has ___(3)___."), std::string::npos);
  EXPECT_EQ(fill_gaps(g), sample_lecture());
  EXPECT_NO_THROW(validate_gfq(g));
}

TEST(Gfq, KeepsSourceCasing) {
  GfqPayload g = generate_gfq(sample_lecture(), {"open SOURCE software"});
  EXPECT_EQ(g.answers, std::vector<std::string>{"Open source software"});
  EXPECT_EQ(fill_gaps(g), sample_lecture());
}

TEST(Gfq, Errors) {
  EXPECT_EQ(code_of([] { generate_gfq(sample_lecture(), {"quantum"}); }),
            ErrorCode::kKeywordNotInSummary);
  EXPECT_EQ(code_of([] { generate_gfq(sample_lecture(), {"source code", "code"}); }),
            ErrorCode::kOverlappingKeywords);
  EXPECT_EQ(code_of([] { generate_gfq(sample_lecture(), {}); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([] { generate_gfq("Fill ___(1)___ here.", {"Fill"}); }),
            ErrorCode::kInvalidArgument);
  GfqPayload broken{"A ___(2)___ b.", {"x"}};
  EXPECT_EQ(code_of([&] { validate_gfq(broken); }), ErrorCode::kInvalidAnswerForType);
  GfqPayload short_answers{"A ___(1)___ b ___(2)___.", {"x"}};
  EXPECT_EQ(code_of([&] { validate_gfq(short_answers); }),
            ErrorCode::kInvalidAnswerForType);
}

// Property: whenever generate_gfq accepts a keyword set, filling the blanks
// restores the summary byte for byte.
TEST(Gfq, RoundTripOnRandomPairs) {
  ProseGenerator gen(23);
  int accepted = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::string summary = gen.paragraph(2 + trial % 5);
    auto cands = extract_candidates(summary);
    std::shuffle(cands.begin(), cands.end(), gen.rng());
    std::vector<std::string> keywords;
    for (size_t i = 0; i < cands.size() && i < 1 + static_cast<size_t>(trial % 4); ++i) {
      keywords.push_back(cands[i].phrase);
    }
    try {
      GfqPayload g = generate_gfq(summary, keywords);
      ++accepted;
      EXPECT_EQ(fill_gaps(g), summary);
      EXPECT_EQ(g.answers.size(), keywords.size());
      EXPECT_NO_THROW(validate_gfq(g));
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kOverlappingKeywords);
    }
  }
  EXPECT_GT(accepted, 150);
}

TEST(Mcq, ShuffleIsSeededAndComplete) {
  SaqPayload saq{"When was Linux created?", "25 years ago"};
  McqPayload a = generate_mcq(saq, sample_lecture(), 3, 42);
  McqPayload b = generate_mcq(saq, sample_lecture(), 3, 42);
  EXPECT_EQ(a.option_order, b.option_order);
  std::vector<std::string> opts = a.options();
  ASSERT_EQ(opts.size(), 4u);
  EXPECT_EQ(std::count(opts.begin(), opts.end(), "25 years ago"), 1);
  std::set<std::string> distractors(a.distractors.begin(), a.distractors.end());
  EXPECT_EQ(distractors,
            (std::set<std::string>{"10 years ago", "15 years ago", "20 years ago"}));
  EXPECT_NO_THROW(validate_mcq(a));
  EXPECT_EQ(code_of([&] { generate_mcq(saq, sample_lecture(), 0, 1); }),
            ErrorCode::kInvalidArgument);
}

TEST(Mcq, ValidationCatchesCollisions) {
  McqPayload m{"Q?", "a", {"b", "A"}, {0, 1, 2}};
  EXPECT_EQ(code_of([&] { validate_mcq(m); }), ErrorCode::kInvalidAnswerForType);
  McqPayload bad_order{"Q?", "a", {"b"}, {0, 0}};
  EXPECT_EQ(code_of([&] { validate_mcq(bad_order); }), ErrorCode::kInvalidAnswerForType);
}

// Property: seeded_permutation always yields a permutation, reproducibly.
TEST(Mcq, SeededPermutationIsPermutation) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 500; ++trial) {
    const size_t n = 1 + rng() % 8;
    const uint64_t seed = rng();
    std::vector<int> p = seeded_permutation(n, seed);
    EXPECT_EQ(p, seeded_permutation(n, seed));
    std::vector<int> sorted = p;
    std::sort(sorted.begin(), sorted.end());
    for (size_t i = 0; i < n; ++i) EXPECT_EQ(sorted[i], static_cast<int>(i));
  }
}

TEST(Payload, JsonRoundTrip) {
  McqPayload m = generate_mcq({"When was Linux created?", "25 years ago"},
                              sample_lecture(), 3, 7);
  QuestionPayload back = payload_from_json(QuestionType::kMcq, payload_to_json(m));
  EXPECT_EQ(std::get<McqPayload>(back).option_order, m.option_order);
  GfqPayload g = generate_gfq(sample_lecture(), {"kernel"});
  QuestionPayload gb = payload_from_json(QuestionType::kGfq, payload_to_json(g));
  EXPECT_EQ(std::get<GfqPayload>(gb).answers, g.answers);
  EXPECT_EQ(payload_type(gb), QuestionType::kGfq);
}

}  // namespace
}  // namespace lqg
