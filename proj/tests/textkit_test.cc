#include "lectureqg/textkit.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <tuple>

#include "lectureqg/error.h"
#include "lectureqg/util.h"
#include "test_support.h"

namespace lqg {
namespace {

using testing::code_of;
using testing::oracle_occurrences;
using testing::ProseGenerator;
using testing::sample_lecture;

std::vector<std::string> sentence_texts(std::string_view text) {
  std::vector<std::string> out;
  for (const Sentence& s : split_sentences(text)) out.push_back(s.text);
  return out;
}

TEST(Sentences, AbbreviationsAndDecimalsDoNotSplit) {
  EXPECT_EQ(sentence_texts("Dr. Smith came. Pi is 3.14 roughly! Is it? Yes"),
            (std::vector<std::string>{"Dr. Smith came.", "Pi is 3.14 roughly!",
                                      "Is it?", "Yes"}));
  EXPECT_TRUE(split_sentences("   ").empty());
}

TEST(Sentences, OffsetsPointIntoSource) {
  const std::string& text = sample_lecture();
  for (const Sentence& s : split_sentences(text)) {
    EXPECT_EQ(text.substr(s.begin, s.end - s.begin), s.text);
  }
}

TEST(Tokenize, OffsetsAndSentenceStarts) {
  const std::string text = "Grass is green. It grows.";
  std::vector<Token> toks = analyze(text);
  ASSERT_EQ(toks.size(), 7u);
  for (const Token& t : toks) EXPECT_EQ(text.substr(t.begin, t.end - t.begin), t.text);
  EXPECT_TRUE(toks[0].sentence_initial);
  EXPECT_TRUE(toks[4].sentence_initial);
  EXPECT_FALSE(toks[1].sentence_initial);
  EXPECT_EQ(toks[1].pos, Pos::kAux);
  EXPECT_EQ(toks[3].pos, Pos::kPunct);
}

TEST(PosTag, PluralVerbAfterSubjectNoun) {
  std::vector<Token> toks = analyze("Free software respects the freedom of users.");
  EXPECT_EQ(toks[2].text, "respects");
  EXPECT_EQ(toks[2].pos, Pos::kVerb);
  std::vector<Token> names = analyze("Dr. Smith teaches the course on Mondays.");
  EXPECT_EQ(names[0].pos, Pos::kPropn);
  EXPECT_EQ(names[1].pos, Pos::kPropn);
  EXPECT_EQ(names[6].pos, Pos::kPropn);
}

TEST(Occurrences, WholeWordCaseInsensitive) {
  EXPECT_EQ(find_occurrences("Source code, open source; sources.", "source"),
            (std::vector<size_t>{0, 18}));
  EXPECT_EQ(find_occurrences("aaa", "aa"), std::vector<size_t>{});
  EXPECT_EQ(find_occurrences("a a a", "a a"), (std::vector<size_t>{0}));
  EXPECT_TRUE(find_occurrences("abc", "").empty());
}

TEST(Candidates, SampleLecture) {
  auto cands = extract_candidates(sample_lecture());
  std::map<std::string, KeywordCandidate> by_phrase;
  for (const auto& c : cands) by_phrase[c.phrase] = c;
  ASSERT_TRUE(by_phrase.count("Open source software"));
  EXPECT_EQ(by_phrase["Open source software"].frequency, 2);
  EXPECT_EQ(cands.front().phrase, "Open source software");
  EXPECT_EQ(by_phrase["Linus Torvalds"].kind, CandidateKind::kNamedEntity);
  EXPECT_EQ(by_phrase["25 years ago"].kind, CandidateKind::kNamedEntity);
  EXPECT_EQ(by_phrase["Dr. Smith"].kind, CandidateKind::kNamedEntity);
  EXPECT_EQ(by_phrase["kernel"].kind, CandidateKind::kNounPhrase);
  EXPECT_FALSE(by_phrase.count("25 years"));
  EXPECT_EQ(extract_candidates(sample_lecture(), 3).size(), 3u);
}

TEST(Candidates, CustomKeywordValidation) {
  KeywordCandidate c = validate_custom_keyword(sample_lecture(), "  the freedom ");
  EXPECT_EQ(c.phrase, "the freedom");
  EXPECT_EQ(c.origin, KeywordOrigin::kCustom);
  EXPECT_EQ(c.frequency, 1);
  EXPECT_EQ(code_of([] { validate_custom_keyword(sample_lecture(), "quantum"); }),
            ErrorCode::kPhraseNotInSegment);
  EXPECT_EQ(code_of([] { validate_custom_keyword(sample_lecture(), " "); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(classify_phrase("Ada Lovelace"), CandidateKind::kNamedEntity);
  EXPECT_EQ(classify_phrase("March 2020"), CandidateKind::kNamedEntity);
  EXPECT_EQ(classify_phrase("source code"), CandidateKind::kNounPhrase);
}

// Property: on random prose every candidate's frequency and first offset
// match the word-span oracle, and the list is in the documented order.
TEST(Candidates, MatchOracleOnRandomProse) {
  ProseGenerator gen(11);
  for (int trial = 0; trial < 150; ++trial) {
    const std::string text = gen.paragraph(3 + trial % 6);
    auto cands = extract_candidates(text);
    ASSERT_FALSE(cands.empty()) << text;
    for (const KeywordCandidate& c : cands) {
      std::vector<size_t> hits = oracle_occurrences(text, c.phrase);
      ASSERT_FALSE(hits.empty()) << c.phrase;
      EXPECT_EQ(c.frequency, static_cast<int>(hits.size())) << c.phrase << " in " << text;
      EXPECT_EQ(c.first_offset, hits.front());
    }
    auto sorted = cands;
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
      return std::make_tuple(-a.frequency, a.first_offset, a.phrase) <
             std::make_tuple(-b.frequency, b.first_offset, b.phrase);
    });
    for (size_t i = 0; i < cands.size(); ++i) EXPECT_EQ(cands[i].phrase, sorted[i].phrase);
    std::set<std::string> keys;
    for (const auto& c : cands) EXPECT_TRUE(keys.insert(to_lower(c.phrase)).second);
  }
}

TEST(Lexicon, OverridesReplaceLists) {
  testing::TempDir dir;
  {
    std::ofstream out(dir.path() / "units.txt");
    out << "# custom\nparsecs\n";
  }
  Lexicon lex = Lexicon::defaults();
  EXPECT_TRUE(lex.is_unit("years"));
  lex.load_overrides(dir.path());
  EXPECT_TRUE(lex.is_unit("parsecs"));
  EXPECT_FALSE(lex.is_unit("years"));
  EXPECT_TRUE(Lexicon::defaults().is_unit("years"));
}

TEST(JoinTokens, AttachesClosingPunctuation) {
  EXPECT_EQ(join_tokens({"Hello", ",", "world", "(", "x", ")", "!"}), "Hello, world (x)!");
}

}  // namespace
}  // namespace lqg
