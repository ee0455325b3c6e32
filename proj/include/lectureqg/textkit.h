#ifndef LECTUREQG_TEXTKIT_H_
#define LECTUREQG_TEXTKIT_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace lqg {

// Rule-based English text analysis: tokens, sentences, coarse part-of-speech
// tags, noun-phrase and named-entity chunks.

enum class Pos {
  kDet,
  kAdj,
  kNoun,
  kPropn,
  kVerb,
  kAux,
  kNum,
  kPron,
  kAdp,
  kPunct,
  kOther,
};

std::string_view pos_name(Pos pos);

struct Token {
  std::string text;
  size_t begin = 0;  // byte offsets into the source, [begin, end)
  size_t end = 0;
  Pos pos = Pos::kOther;
  bool sentence_initial = false;
};

struct Sentence {
  std::string text;
  size_t begin = 0;
  size_t end = 0;
};

enum class CandidateKind { kNounPhrase, kNamedEntity };
enum class KeywordOrigin { kRecommended, kCustom };

std::string_view candidate_kind_name(CandidateKind kind);
CandidateKind parse_candidate_kind(std::string_view name);
std::string_view keyword_origin_name(KeywordOrigin origin);
KeywordOrigin parse_keyword_origin(std::string_view name);

struct KeywordCandidate {
  std::string phrase;
  CandidateKind kind = CandidateKind::kNounPhrase;
  int frequency = 0;
  size_t first_offset = 0;
  KeywordOrigin origin = KeywordOrigin::kRecommended;
};

inline constexpr size_t kDefaultKeywordLimit = 20;

// Word lists driving the tagger, the sentence splitter and the summarizer.
// Each list maps to a plain-text file (one entry per line, '#' comments) so
// deployments can override any of them; see Lexicon::load_overrides().
class Lexicon {
 public:
  static const Lexicon& defaults();

  // Replaces every list for which `dir` contains a file of the same name
  // (determiners.txt, prepositions.txt, ...). Missing files keep defaults.
  void load_overrides(const std::filesystem::path& dir);

  // File names understood by load_overrides().
  static std::vector<std::string> list_names();

  // Closed-class tag, if `lower` is listed.
  bool closed_class(const std::string& lower, Pos* pos) const;
  bool is_verb(const std::string& lower) const;
  // Base form of a known verb form, or empty.
  std::string verb_base(const std::string& lower) const;
  bool is_past_form(const std::string& lower) const;
  bool is_adjective(const std::string& lower) const;
  bool is_number_word(const std::string& lower) const;
  bool is_unit(const std::string& lower) const;
  bool is_month(const std::string& lower) const;
  bool is_person_title(const std::string& lower) const;
  bool is_abbreviation(const std::string& lower) const;
  bool is_stopword(const std::string& lower) const;

  const std::vector<std::string>& abbreviations() const {
    return abbreviations_;
  }

 private:
  void rebuild();

  std::unordered_map<std::string, std::vector<std::string>> lists_;
  std::unordered_map<std::string, Pos> closed_;
  std::unordered_map<std::string, std::string> verb_forms_;
  std::unordered_set<std::string> past_forms_;
  std::unordered_set<std::string> adjectives_, number_words_, units_, months_,
      titles_, stopwords_;
  std::vector<std::string> abbreviations_;  // lower-cased
};

std::vector<std::string> read_word_list(const std::filesystem::path& path);

std::vector<Sentence> split_sentences(std::string_view text,
                                      const Lexicon& lex = Lexicon::defaults());

// Splits into word, number and punctuation tokens and marks sentence-initial
// tokens. Tags are left at kOther; see pos_tag().
std::vector<Token> tokenize(std::string_view text,
                            const Lexicon& lex = Lexicon::defaults());

void pos_tag(std::vector<Token>& tokens,
             const Lexicon& lex = Lexicon::defaults());

// tokenize() followed by pos_tag().
std::vector<Token> analyze(std::string_view text,
                           const Lexicon& lex = Lexicon::defaults());

// Start offsets of case-insensitive, non-overlapping, whole-word occurrences
// of `phrase` in `text`, scanning left to right.
std::vector<size_t> find_occurrences(std::string_view text,
                                     std::string_view phrase);

// Candidates ranked by frequency (desc), first offset (asc), phrase (asc).
// limit == 0 returns every candidate.
std::vector<KeywordCandidate> extract_candidates(
    std::string_view segment_text, size_t limit = 0,
    const Lexicon& lex = Lexicon::defaults());

// Throws InvalidArgument (empty phrase), PhraseNotInSegment.
KeywordCandidate validate_custom_keyword(
    std::string_view segment_text, std::string_view phrase,
    const Lexicon& lex = Lexicon::defaults());

// Named entity if the phrase is a date/duration expression or a run of
// capitalized words, noun phrase otherwise.
CandidateKind classify_phrase(std::string_view phrase,
                              const Lexicon& lex = Lexicon::defaults());

// Joins token texts with single spaces, attaching closing punctuation to the
// previous token.
std::string join_tokens(const std::vector<std::string>& words);

}  // namespace lqg

#endif  // LECTUREQG_TEXTKIT_H_
