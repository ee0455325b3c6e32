#include "lectureqg/qgen.h"

#include <algorithm>
#include <cctype>
#include <optional>
#include <random>
#include <set>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "lectureqg/distract.h"
#include "lectureqg/error.h"
#include "lectureqg/summarize.h"
#include "lectureqg/util.h"

namespace lqg {

using json = nlohmann::json;

// -- Names -------------------------------------------------------------------

std::string_view question_type_name(QuestionType t) {
  switch (t) {
    case QuestionType::kSaq: return "SAQ";
    case QuestionType::kBlq: return "BLQ";
    case QuestionType::kGfq: return "GFQ";
    case QuestionType::kMcq: return "MCQ";
  }
  return "SAQ";
}

QuestionType parse_question_type(std::string_view name) {
  std::string up(name);
  for (char& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (up == "SAQ") return QuestionType::kSaq;
  if (up == "BLQ") return QuestionType::kBlq;
  if (up == "GFQ") return QuestionType::kGfq;
  if (up == "MCQ") return QuestionType::kMcq;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown question type '" + std::string(name) + "'");
}

std::string_view question_source_name(QuestionSource s) {
  return s == QuestionSource::kProvider ? "provider" : "fallback_builtin";
}

QuestionSource parse_question_source(std::string_view name) {
  if (name == "provider") return QuestionSource::kProvider;
  if (name == "fallback_builtin") return QuestionSource::kFallbackBuiltin;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown question source '" + std::string(name) + "'");
}

std::string_view yes_no_name(YesNo a) { return a == YesNo::kYes ? "yes" : "no"; }

YesNo parse_yes_no(std::string_view name) {
  std::string l = to_lower(trim(name));
  if (l == "yes" || l == "true") return YesNo::kYes;
  if (l == "no" || l == "false") return YesNo::kNo;
  throw Error(ErrorCode::kInvalidArgument,
              "expected yes or no, got '" + std::string(name) + "'");
}

QuestionType payload_type(const QuestionPayload& p) {
  switch (p.index()) {
    case 0: return QuestionType::kSaq;
    case 1: return QuestionType::kBlq;
    case 2: return QuestionType::kGfq;
    default: return QuestionType::kMcq;
  }
}

std::vector<std::string> McqPayload::options() const {
  std::vector<std::string> all;
  all.push_back(correct_answer);
  all.insert(all.end(), distractors.begin(), distractors.end());
  std::vector<std::string> out;
  out.reserve(option_order.size());
  for (int i : option_order) {
    if (i >= 0 && static_cast<size_t>(i) < all.size()) out.push_back(all[i]);
  }
  return out;
}

// -- JSON --------------------------------------------------------------------

json payload_to_json(const QuestionPayload& p) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, SaqPayload>) {
          return {{"question_text", v.question_text}, {"answer", v.answer}};
        } else if constexpr (std::is_same_v<T, BlqPayload>) {
          return {{"question_text", v.question_text},
                  {"answer", yes_no_name(v.answer)}};
        } else if constexpr (std::is_same_v<T, GfqPayload>) {
          return {{"gapped_text", v.gapped_text}, {"answers", v.answers}};
        } else {
          return {{"question_text", v.question_text},
                  {"correct_answer", v.correct_answer},
                  {"distractors", v.distractors},
                  {"option_order", v.option_order},
                  {"options", v.options()}};
        }
      },
      p);
}

QuestionPayload payload_from_json(QuestionType type, const json& j) {
  switch (type) {
    case QuestionType::kSaq:
      return SaqPayload{j.at("question_text").get<std::string>(),
                        j.at("answer").get<std::string>()};
    case QuestionType::kBlq:
      return BlqPayload{j.at("question_text").get<std::string>(),
                        parse_yes_no(j.at("answer").get<std::string>())};
    case QuestionType::kGfq:
      return GfqPayload{j.at("gapped_text").get<std::string>(),
                        j.at("answers").get<std::vector<std::string>>()};
    case QuestionType::kMcq:
      return McqPayload{j.at("question_text").get<std::string>(),
                        j.at("correct_answer").get<std::string>(),
                        j.at("distractors").get<std::vector<std::string>>(),
                        j.at("option_order").get<std::vector<int>>()};
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown question type");
}

// -- Shared helpers ----------------------------------------------------------

namespace {

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 32);
  return s;
}

bool all_caps(std::string_view s) {
  int letters = 0;
  for (char c : s) {
    if (std::isalpha(static_cast<unsigned char>(c))) {
      if (!is_upper(c)) return false;
      ++letters;
    }
  }
  return letters >= 2;
}

std::vector<Token> clause_tokens(std::string_view sentence, const Lexicon& lex) {
  std::vector<Token> toks = analyze(sentence, lex);
  while (!toks.empty() && toks.back().pos == Pos::kPunct) toks.pop_back();
  return toks;
}

// Decides whether the first word of a sentence keeps its capital letter once
// it moves away from the sentence start. A word keeps it when it is tagged as a
// proper noun, written in capitals, or capitalized elsewhere mid-sentence.
class CaseGuide {
 public:
  CaseGuide(std::string_view context, const Lexicon& lex) {
    for (const Token& t : analyze(context, lex)) {
      if (t.text.empty()) continue;
      if (!t.sentence_initial && is_upper(t.text[0])) proper_.insert(t.text);
    }
  }

  std::string moved(const std::string& word, Pos pos) const {
    if (word.empty() || !is_upper(word[0])) return word;
    if (word == "I" || pos == Pos::kPropn || all_caps(word) ||
        proper_.count(word) > 0) {
      return word;
    }
    std::string out = word;
    out[0] = static_cast<char>(out[0] - 'A' + 'a');
    return out;
  }

 private:
  std::unordered_set<std::string> proper_;
};

// Text pieces cut from one sentence, joined with single spaces.
class Assembler {
 public:
  Assembler(std::string_view text, const std::vector<Token>& toks,
            const CaseGuide& guide)
      : text_(text), toks_(toks), guide_(guide) {}

  Assembler& word(std::string w) {
    add(std::move(w));
    return *this;
  }

  // Source text covering tokens [from, to), case-adjusting token 0.
  Assembler& tokens(size_t from, size_t to) {
    if (from >= to || from >= toks_.size()) return *this;
    to = std::min(to, toks_.size());
    std::string piece(text_.substr(toks_[from].begin,
                                   toks_[to - 1].end - toks_[from].begin));
    if (from == 0) {
      std::string first = guide_.moved(toks_[0].text, toks_[0].pos);
      piece.replace(0, toks_[0].text.size(), first);
    }
    add(std::move(piece));
    return *this;
  }

  std::string question() const {
    std::string out = out_;
    while (!out.empty() &&
           (std::ispunct(static_cast<unsigned char>(out.back())) ||
            std::isspace(static_cast<unsigned char>(out.back()))) &&
           out.back() != ')' && out.back() != '"' && out.back() != '\'') {
      out.pop_back();
    }
    return capitalize(out) + "?";
  }

 private:
  void add(std::string piece) {
    piece = trim(piece);
    if (piece.empty()) return;
    bool glue = piece[0] == ',' || piece[0] == ';' || piece[0] == ':' ||
                piece[0] == '.';
    if (!out_.empty() && !glue) out_ += ' ';
    out_ += piece;
  }

  std::string_view text_;
  const std::vector<Token>& toks_;
  const CaseGuide& guide_;
  std::string out_;
};

bool is_be_or_modal(const std::string& lower) {
  static const std::set<std::string> kWords = {
      "is",    "are",    "was",   "were", "am",    "be",
      "can",   "could",  "will",  "would", "shall", "should",
      "may",   "might",  "must"};
  return kWords.count(lower) > 0;
}

// An auxiliary that can move to the front of a yes/no or WH question.
bool frontable_aux(const std::vector<Token>& toks, size_t x) {
  std::string lower = to_lower(toks[x].text);
  if (is_be_or_modal(lower)) return true;
  for (size_t k = x + 1; k < toks.size() && k <= x + 3; ++k) {
    if (toks[k].pos == Pos::kVerb) return true;
    if (toks[k].pos != Pos::kOther) break;
  }
  return false;
}

struct DoSupport {
  std::string aux;   // do / does / did
  std::string base;  // verb base form
};

DoSupport do_support(const std::string& verb, const Lexicon& lex) {
  std::string lower = to_lower(verb);
  if (lower == "has") return {"does", "have"};
  if (lower == "have") return {"do", "have"};
  if (lower == "had") return {"did", "have"};
  if (lower == "does") return {"does", "do"};
  if (lower == "do") return {"do", "do"};
  if (lower == "did") return {"did", "do"};

  std::string base = lex.verb_base(lower);
  bool past = lex.is_past_form(lower);
  if (base.empty()) {
    base = lower;
    if (ends_with(lower, "ied")) {
      base = lower.substr(0, lower.size() - 3) + "y";
      past = true;
    } else if (ends_with(lower, "ed") && lower.size() > 4) {
      base = lower.substr(0, lower.size() - 2);
      size_t n = base.size();
      if (n > 2 && base[n - 1] == base[n - 2] &&
          std::string_view("aeiouls").find(base[n - 1]) == std::string::npos) {
        base.pop_back();
      }
      past = true;
    } else if (ends_with(lower, "ies")) {
      base = lower.substr(0, lower.size() - 3) + "y";
    } else if (ends_with(lower, "ches") || ends_with(lower, "shes") ||
               ends_with(lower, "sses") || ends_with(lower, "xes")) {
      base = lower.substr(0, lower.size() - 2);
    } else if (ends_with(lower, "s") && !ends_with(lower, "ss")) {
      base = lower.substr(0, lower.size() - 1);
    }
  }
  if (past) return {"did", base};
  bool third = lower != base && !ends_with(lower, "ing");
  return {third ? "does" : "do", base};
}

std::string normalize_question(std::string_view q) {
  std::string out;
  bool space = false;
  for (char c : to_lower(q)) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
      continue;
    }
    if (space) out += ' ';
    space = false;
    out += c;
  }
  while (!out.empty() && (out.back() == '?' || out.back() == ' ')) out.pop_back();
  return out;
}

std::string ensure_question_mark(std::string q) {
  q = trim(q);
  if (q.empty() || q.back() != '?') {
    while (!q.empty() && (q.back() == '.' || q.back() == '!')) q.pop_back();
    q += '?';
  }
  return q;
}

double cap_fallback(double score) { return std::min(score, kFallbackScoreCap); }

// Stable merge: provider candidates first on equal scores, duplicates (by
// normalized text) keep their best-scored instance.
std::vector<GeneratedQuestion> merge_ranked(
    std::vector<GeneratedQuestion> provider,
    std::vector<GeneratedQuestion> fallback, int n,
    const std::function<std::string(const GeneratedQuestion&)>& key) {
  std::vector<GeneratedQuestion> all = std::move(provider);
  for (auto& q : fallback) all.push_back(std::move(q));
  std::stable_sort(all.begin(), all.end(),
                   [](const GeneratedQuestion& a, const GeneratedQuestion& b) {
                     return a.confidence > b.confidence;
                   });
  std::vector<GeneratedQuestion> out;
  std::set<std::string> seen;
  for (auto& q : all) {
    if (static_cast<int>(out.size()) >= n) break;
    if (!seen.insert(key(q)).second) continue;
    q.rank = static_cast<int>(out.size()) + 1;
    out.push_back(std::move(q));
  }
  return out;
}

std::string question_key(const GeneratedQuestion& q) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GfqPayload>) {
          return normalize_question(v.gapped_text);
        } else {
          return normalize_question(v.question_text);
        }
      },
      q.payload);
}

// Normalized extractive score (0..1) for each sentence.
std::vector<double> normalized_scores(const std::vector<ScoredSentence>& s) {
  double best = 0.0;
  for (const auto& x : s) best = std::max(best, x.score);
  std::vector<double> out;
  for (const auto& x : s) out.push_back(best > 0 ? x.score / best : 0.0);
  return out;
}

// -- SAQ templates -----------------------------------------------------------

struct WhChoice {
  std::string wh;
  bool temporal = false;
  bool person = false;
};

WhChoice choose_wh(const std::vector<Token>& toks, size_t ab, size_t ae,
                   std::string_view answer, const Lexicon& lex) {
  std::vector<std::string> words;
  {
    std::string w;
    for (char c : std::string(answer)) {
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!w.empty()) words.push_back(w);
        w.clear();
      } else {
        w += c;
      }
    }
    if (!w.empty()) words.push_back(w);
  }
  WhChoice out{"What"};
  if (words.empty()) return out;
  std::vector<std::string> lower;
  for (const auto& w : words) lower.push_back(to_lower(w));

  auto is_num = [&](const std::string& l) {
    return std::isdigit(static_cast<unsigned char>(l[0])) ||
           lex.is_number_word(l);
  };
  auto is_year = [](const std::string& l) {
    return l.size() == 4 && std::all_of(l.begin(), l.end(), ::isdigit) &&
           std::stoi(l) >= 1000 && std::stoi(l) <= 2100;
  };
  bool has_month = std::any_of(lower.begin(), lower.end(),
                               [&](const auto& l) { return lex.is_month(l); });
  if (lower.back() == "ago" || has_month ||
      (lower.size() == 1 && is_year(lower[0]))) {
    return {"When", true, false};
  }
  if (is_num(lower[0])) {
    size_t k = 0;
    while (k < lower.size() && is_num(lower[k])) ++k;
    if (k == lower.size()) return {"How many"};
    if (k + 1 == lower.size() && lex.is_unit(lower[k])) {
      return {"How long", true, false};
    }
    std::string wh = "How many";
    for (size_t i = k; i < words.size(); ++i) wh += " " + words[i];
    return {wh};
  }
  bool capitalized = std::all_of(words.begin(), words.end(), [](const auto& w) {
    return is_upper(w[0]);
  });
  bool title_before = ab > 0 && lex.is_person_title(to_lower(toks[ab - 1].text));
  bool title_inside = lex.is_person_title(lower[0]);
  (void)ae;
  if (capitalized && (title_before || title_inside)) return {"Who", false, true};
  return out;
}

// WH question with the answer span [ab, ae) moved to the front, or nullopt
// when the sentence shape is not covered by the templates.
std::optional<std::string> wh_question(std::string_view sentence,
                                       const std::vector<Token>& toks,
                                       size_t ab, size_t ae,
                                       std::string_view answer,
                                       const CaseGuide& guide,
                                       const Lexicon& lex) {
  WhChoice wh = choose_wh(toks, ab, ae, answer, lex);
  if (wh.person && ab > 0 && lex.is_person_title(to_lower(toks[ab - 1].text))) {
    --ab;
  }
  if (ab > 0 && toks[ab - 1].pos == Pos::kDet && !wh.temporal) --ab;
  if (ab > 0 && toks[ab - 1].pos == Pos::kAdp && wh.temporal) {
    if (to_lower(toks[ab - 1].text) == "since") wh.wh = "Since when";
    --ab;
  }

  size_t p = toks.size();
  for (size_t i = 0; i < toks.size(); ++i) {
    if (toks[i].pos == Pos::kVerb || toks[i].pos == Pos::kAux) {
      p = i;
      break;
    }
  }
  if (p == toks.size()) return std::nullopt;

  Assembler q(sentence, toks, guide);
  if (ae <= p) {
    q.word(wh.wh).tokens(p, toks.size());
    return q.question();
  }
  if (ab < p || p == 0) return std::nullopt;

  for (size_t x = p; x < ab; ++x) {
    if (toks[x].pos == Pos::kVerb) break;
    if (toks[x].pos == Pos::kAux && frontable_aux(toks, x)) {
      q.word(wh.wh)
          .word(to_lower(toks[x].text))
          .tokens(0, x)
          .tokens(x + 1, ab)
          .tokens(ae, toks.size());
      return q.question();
    }
  }
  DoSupport ds = do_support(toks[p].text, lex);
  q.word(wh.wh)
      .word(ds.aux)
      .tokens(0, p)
      .word(ds.base)
      .tokens(p + 1, ab)
      .tokens(ae, toks.size());
  return q.question();
}

std::string cloze_question(std::string_view sentence, size_t char_begin,
                           size_t char_len) {
  std::string s = trim(sentence);
  std::string blanked = std::string(sentence.substr(0, char_begin)) + "_____" +
                        std::string(sentence.substr(char_begin + char_len));
  return "What completes the statement \"" + trim(blanked) + "\"?";
}

// -- BLQ templates -----------------------------------------------------------

// `wrapped` skips auxiliary fronting and always uses "Is it true that".
std::string yes_no_question(std::string_view sentence, const CaseGuide& guide,
                            const Lexicon& lex, bool wrapped = false) {
  std::string whole = trim(sentence);
  if (!whole.empty() && whole.back() == '?') return capitalize(whole);
  std::vector<Token> toks = clause_tokens(sentence, lex);
  for (size_t x = 0; !wrapped && x < toks.size(); ++x) {
    if (toks[x].pos != Pos::kVerb && toks[x].pos != Pos::kAux) continue;
    if (x == 0) break;
    Assembler q(sentence, toks, guide);
    if (toks[x].pos == Pos::kAux && frontable_aux(toks, x)) {
      q.word(to_lower(toks[x].text)).tokens(0, x).tokens(x + 1, toks.size());
    } else {
      DoSupport ds = do_support(toks[x].text, lex);
      q.word(ds.aux).tokens(0, x).word(ds.base).tokens(x + 1, toks.size());
    }
    return q.question();
  }
  Assembler q(sentence, toks, guide);
  q.word("Is it true that").tokens(0, toks.size());
  return q.question();
}

std::string negated_question(std::string_view sentence, const CaseGuide& guide,
                             const Lexicon& lex, bool wrapped = false) {
  std::vector<Token> toks = clause_tokens(sentence, lex);
  for (size_t x = 0; !wrapped && x < toks.size(); ++x) {
    if (toks[x].pos == Pos::kVerb) break;
    if (toks[x].pos != Pos::kAux) continue;
    if (x > 0 && frontable_aux(toks, x)) {
      Assembler q(sentence, toks, guide);
      q.word(to_lower(toks[x].text))
          .tokens(0, x)
          .word("not")
          .tokens(x + 1, toks.size());
      return q.question();
    }
    break;
  }
  Assembler q(sentence, toks, guide);
  q.word("Is it false that").tokens(0, toks.size());
  return q.question();
}

std::string replace_span(std::string_view s, size_t b, size_t len,
                         std::string_view with) {
  return std::string(s.substr(0, b)) + std::string(with) +
         std::string(s.substr(b + len));
}

// One factual change to the sentence: a shifted number, else a noun phrase
// swapped for another candidate of the summary.
bool has_determiner(const std::string& word, const Lexicon& lex) {
  Pos pos;
  if (lex.closed_class(to_lower(word), &pos) &&
      (pos == Pos::kDet || pos == Pos::kPron || pos == Pos::kNum)) {
    return true;
  }
  return !word.empty() && std::isdigit(static_cast<unsigned char>(word[0]));
}

// True when the word right before offset `at` is a determiner-like word.
bool determiner_before(std::string_view sentence, size_t at,
                       const Lexicon& lex) {
  const Token* prev = nullptr;
  std::vector<Token> toks = tokenize(sentence, lex);
  for (const Token& t : toks) {
    if (t.end > at) break;
    prev = &t;
  }
  return prev != nullptr && has_determiner(prev->text, lex);
}

std::optional<std::string> perturb(std::string_view sentence,
                                   const std::vector<KeywordCandidate>& cands,
                                   const CaseGuide& guide,
                                   const Lexicon& lex) {
  for (const Token& t : tokenize(sentence, lex)) {
    if (t.text.size() > 9 ||
        !std::all_of(t.text.begin(), t.text.end(), ::isdigit)) {
      continue;
    }
    std::vector<std::string> alts = numeric_alternatives(t.text);
    if (!alts.empty()) {
      return replace_span(sentence, t.begin, t.text.size(), alts.front());
    }
  }
  for (const KeywordCandidate& c : cands) {
    std::vector<size_t> hits = find_occurrences(sentence, c.phrase);
    if (hits.empty()) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const KeywordCandidate& r : cands) {
        if (pass == 0 && r.kind != c.kind) continue;
        if (phrases_overlap(r.phrase, c.phrase)) continue;
        if (!find_occurrences(sentence, r.phrase).empty()) continue;
        std::string with = r.phrase;
        if (r.kind == CandidateKind::kNounPhrase) {
          size_t sp = with.find(' ');
          std::string first = with.substr(0, sp);
          with.replace(0, first.size(), guide.moved(first, Pos::kNoun));
          if (!has_determiner(first, lex) &&
              !determiner_before(sentence, hits.front(), lex)) {
            with = "the " + with;
          }
        }
        return replace_span(sentence, hits.front(), c.phrase.size(), with);
      }
    }
  }
  return std::nullopt;
}

}  // namespace

// -- SAQ ---------------------------------------------------------------------

std::vector<GeneratedQuestion> generate_saq(std::string_view segment_text,
                                            std::string_view keyword, int n,
                                            GenerativeProvider* provider,
                                            const Lexicon& lex) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "n must be >= 1");
  const std::string answer = trim(keyword);
  if (answer.empty() || find_occurrences(segment_text, answer).empty()) {
    throw Error(ErrorCode::kKeywordNotInSegment,
                "'" + answer + "' does not occur in the segment");
  }

  std::vector<GeneratedQuestion> fallback;
  CaseGuide guide(segment_text, lex);
  std::vector<ScoredSentence> scored = score_sentences(segment_text, lex);
  std::vector<double> norm = normalized_scores(scored);
  for (size_t i = 0; i < scored.size(); ++i) {
    const std::string& sentence = scored[i].sentence.text;
    std::vector<size_t> hits = find_occurrences(sentence, answer);
    if (hits.empty()) continue;
    const double conf = cap_fallback(0.5 + 0.4 * norm[i]);

    std::vector<Token> toks = clause_tokens(sentence, lex);
    const size_t cb = hits.front();
    const size_t ce = cb + answer.size();
    size_t ab = toks.size();
    size_t ae = 0;
    for (size_t k = 0; k < toks.size(); ++k) {
      if (toks[k].begin < ce && toks[k].end > cb) {
        ab = std::min(ab, k);
        ae = k + 1;
      }
    }
    if (ab < ae) {
      if (auto q = wh_question(sentence, toks, ab, ae, answer, guide, lex)) {
        fallback.push_back({SaqPayload{*q, answer}, conf, 0,
                            QuestionSource::kFallbackBuiltin, false});
      }
    }
    fallback.push_back({SaqPayload{cloze_question(sentence, cb, answer.size()),
                                   answer},
                        std::max(0.0, conf - 0.1), 0,
                        QuestionSource::kFallbackBuiltin, false});
  }
  if (fallback.empty()) {
    // The keyword spans a sentence boundary; blank it in the whole segment.
    size_t cb = find_occurrences(segment_text, answer).front();
    fallback.push_back({SaqPayload{cloze_question(segment_text, cb,
                                                  answer.size()),
                                   answer},
                        0.4, 0, QuestionSource::kFallbackBuiltin, false});
  }

  std::vector<GeneratedQuestion> from_provider;
  if (provider != nullptr) {
    GenerateRequest req;
    req.task = ProviderTask::kSaq;
    req.text = std::string(segment_text);
    req.answer = answer;
    req.n = n;
    for (const ProviderCandidate& c : provider->generate(req).candidates) {
      from_provider.push_back({SaqPayload{ensure_question_mark(c.text), answer},
                               c.score, 0, QuestionSource::kProvider, false});
    }
  }
  return merge_ranked(std::move(from_provider), std::move(fallback), n,
                      question_key);
}

// -- BLQ ---------------------------------------------------------------------

BlqResult generate_blq(std::string_view summary_text, int n_per_polarity,
                       GenerativeProvider* provider, const Lexicon& lex) {
  if (n_per_polarity < 1) {
    throw Error(ErrorCode::kInvalidArgument, "n_per_polarity must be >= 1");
  }
  std::vector<ScoredSentence> scored = score_sentences(summary_text, lex);
  if (scored.empty()) {
    throw Error(ErrorCode::kEmptySummary, "summary is empty");
  }
  std::vector<double> norm = normalized_scores(scored);
  std::vector<size_t> order(scored.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return scored[a].score > scored[b].score;
  });

  std::set<std::string> distinct;
  for (const ScoredSentence& x : scored) {
    distinct.insert(normalize_question(x.sentence.text));
  }
  BlqResult result;
  const size_t want = std::min<size_t>(static_cast<size_t>(n_per_polarity),
                                       distinct.size());
  if (want < static_cast<size_t>(n_per_polarity)) {
    result.insufficient_sentences = true;
    result.warnings.push_back(
        "summary has " + std::to_string(distinct.size()) +
        " distinct sentence(s); generated " + std::to_string(want) +
        " question(s) per polarity instead of " +
        std::to_string(n_per_polarity));
  }

  // Each sentence contributes a primary form and lower-scored alternates, so
  // two sentences that collapse to the same question still fill the set.
  CaseGuide guide(summary_text, lex);
  std::vector<KeywordCandidate> cands = extract_candidates(summary_text, 0, lex);
  std::vector<GeneratedQuestion> yes_fb;
  std::vector<GeneratedQuestion> no_fb;
  auto add = [](std::vector<GeneratedQuestion>& to, std::string q, YesNo a,
                double conf) {
    to.push_back({BlqPayload{std::move(q), a}, conf, 0,
                  QuestionSource::kFallbackBuiltin, false});
  };
  for (size_t i : order) {
    const std::string& sentence = scored[i].sentence.text;
    const double conf = cap_fallback(0.5 + 0.4 * norm[i]);
    const double alt = conf / 2;
    add(yes_fb, yes_no_question(sentence, guide, lex), YesNo::kYes, conf);
    add(yes_fb, yes_no_question(sentence, guide, lex, true), YesNo::kYes, alt);
    if (auto changed = perturb(sentence, cands, guide, lex)) {
      add(no_fb, yes_no_question(*changed, guide, lex), YesNo::kNo, conf);
      add(no_fb, yes_no_question(*changed, guide, lex, true), YesNo::kNo, alt);
    } else {
      add(no_fb, negated_question(sentence, guide, lex), YesNo::kNo,
          std::max(0.0, conf - 0.1));
      add(no_fb, negated_question(sentence, guide, lex, true), YesNo::kNo,
          alt);
    }
  }

  auto from_provider = [&](YesNo polarity) {
    std::vector<GeneratedQuestion> out;
    if (provider == nullptr) return out;
    GenerateRequest req;
    req.task = ProviderTask::kBoolq;
    req.text = std::string(summary_text);
    req.polarity = std::string(yes_no_name(polarity));
    req.n = static_cast<int>(want);
    for (const ProviderCandidate& c : provider->generate(req).candidates) {
      out.push_back({BlqPayload{ensure_question_mark(c.text), polarity},
                     c.score, 0, QuestionSource::kProvider, false});
    }
    return out;
  };

  const int n = static_cast<int>(want);
  result.yes_set = merge_ranked(from_provider(YesNo::kYes), std::move(yes_fb),
                                n, question_key);
  result.no_set = merge_ranked(from_provider(YesNo::kNo), std::move(no_fb), n,
                               question_key);
  return result;
}

// -- GFQ ---------------------------------------------------------------------

std::string gap_marker(int k) { return "___(" + std::to_string(k) + ")___"; }

namespace {

struct Marker {
  size_t begin;
  size_t end;
  int number;
};

std::vector<Marker> find_markers(std::string_view text) {
  std::vector<Marker> out;
  size_t pos = 0;
  while ((pos = text.find("___(", pos)) != std::string_view::npos) {
    size_t d = pos + 4;
    size_t e = d;
    while (e < text.size() && std::isdigit(static_cast<unsigned char>(text[e]))) {
      ++e;
    }
    if (e > d && e - d <= 6 && text.substr(e, 4) == ")___") {
      out.push_back({pos, e + 4, std::stoi(std::string(text.substr(d, e - d)))});
      pos = e + 4;
    } else {
      ++pos;
    }
  }
  return out;
}

}  // namespace

GfqPayload generate_gfq(std::string_view summary_text,
                        const std::vector<std::string>& keywords) {
  if (keywords.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "at least one keyword is required");
  }
  if (summary_text.find("___(") != std::string_view::npos) {
    throw Error(ErrorCode::kInvalidArgument,
                "summary already contains a blank marker");
  }
  struct Span {
    size_t begin;
    size_t len;
  };
  std::vector<Span> used;
  for (const std::string& raw : keywords) {
    std::string kw = trim(raw);
    if (kw.empty()) throw Error(ErrorCode::kInvalidArgument, "empty keyword");
    std::vector<size_t> hits = find_occurrences(summary_text, kw);
    if (hits.empty()) {
      throw Error(ErrorCode::kKeywordNotInSummary,
                  "'" + kw + "' does not occur in the summary");
    }
    bool placed = false;
    for (size_t h : hits) {
      bool clash = std::any_of(used.begin(), used.end(), [&](const Span& s) {
        return h < s.begin + s.len && s.begin < h + kw.size();
      });
      if (!clash) {
        used.push_back({h, kw.size()});
        placed = true;
        break;
      }
    }
    if (!placed) {
      throw Error(ErrorCode::kOverlappingKeywords,
                  "'" + kw + "' overlaps another selected keyword");
    }
  }
  std::sort(used.begin(), used.end(),
            [](const Span& a, const Span& b) { return a.begin < b.begin; });

  GfqPayload out;
  size_t cursor = 0;
  int k = 0;
  for (const Span& s : used) {
    out.gapped_text.append(summary_text.substr(cursor, s.begin - cursor));
    out.gapped_text += gap_marker(++k);
    out.answers.emplace_back(summary_text.substr(s.begin, s.len));
    cursor = s.begin + s.len;
  }
  out.gapped_text.append(summary_text.substr(cursor));
  return out;
}

std::string fill_gaps(const GfqPayload& gfq) {
  std::string out;
  size_t cursor = 0;
  for (const Marker& m : find_markers(gfq.gapped_text)) {
    out.append(gfq.gapped_text, cursor, m.begin - cursor);
    if (m.number >= 1 && static_cast<size_t>(m.number) <= gfq.answers.size()) {
      out += gfq.answers[static_cast<size_t>(m.number - 1)];
    } else {
      out.append(gfq.gapped_text, m.begin, m.end - m.begin);
    }
    cursor = m.end;
  }
  out.append(gfq.gapped_text, cursor, std::string::npos);
  return out;
}

void validate_gfq(const GfqPayload& gfq) {
  std::vector<Marker> markers = find_markers(gfq.gapped_text);
  if (markers.size() != gfq.answers.size()) {
    throw Error(ErrorCode::kInvalidAnswerForType,
                "gapfill has " + std::to_string(markers.size()) +
                    " blanks but " + std::to_string(gfq.answers.size()) +
                    " answers");
  }
  for (size_t i = 0; i < markers.size(); ++i) {
    if (markers[i].number != static_cast<int>(i) + 1) {
      throw Error(ErrorCode::kInvalidAnswerForType,
                  "gapfill blanks must be numbered 1..m in order");
    }
    if (trim(gfq.answers[i]).empty()) {
      throw Error(ErrorCode::kInvalidAnswerForType, "empty gapfill answer");
    }
  }
}

// -- MCQ ---------------------------------------------------------------------

std::vector<int> seeded_permutation(size_t n, uint64_t seed) {
  std::vector<int> perm(n);
  for (size_t i = 0; i < n; ++i) perm[i] = static_cast<int>(i);
  std::mt19937_64 rng(seed);
  for (size_t i = n; i > 1; --i) {
    // Unbiased draw from [0, i).
    const uint64_t bound = i;
    const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t r;
    do {
      r = rng();
    } while (r >= limit);
    std::swap(perm[i - 1], perm[r % bound]);
  }
  return perm;
}

void validate_mcq(const McqPayload& mcq) {
  if (trim(mcq.correct_answer).empty() || mcq.distractors.empty()) {
    throw Error(ErrorCode::kInvalidAnswerForType,
                "multiple choice needs an answer and at least one distractor");
  }
  std::set<std::string> seen{to_lower(trim(mcq.correct_answer))};
  for (const std::string& d : mcq.distractors) {
    if (trim(d).empty() || !seen.insert(to_lower(trim(d))).second) {
      throw Error(ErrorCode::kInvalidAnswerForType,
                  "multiple choice options must be distinct");
    }
  }
  std::vector<int> sorted = mcq.option_order;
  std::sort(sorted.begin(), sorted.end());
  for (size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] != static_cast<int>(i)) {
      throw Error(ErrorCode::kInvalidAnswerForType,
                  "option_order is not a permutation");
    }
  }
  if (sorted.size() != mcq.distractors.size() + 1) {
    throw Error(ErrorCode::kInvalidAnswerForType,
                "option_order does not cover every option");
  }
}

McqPayload generate_mcq(const SaqPayload& saq, std::string_view segment_text,
                        int n_distractors, uint64_t seed,
                        GenerativeProvider* provider, const Lexicon& lex) {
  if (n_distractors < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "a multiple choice question needs at least one distractor");
  }
  if (trim(saq.answer).empty() || trim(saq.question_text).empty()) {
    throw Error(ErrorCode::kInvalidArgument, "invalid short-answer question");
  }
  DistractorRequest req{saq.answer, std::string(segment_text), n_distractors,
                        seed};
  McqPayload out;
  out.question_text = saq.question_text;
  out.correct_answer = saq.answer;
  out.distractors = generate_distractors(req, provider, lex);
  out.option_order = seeded_permutation(out.distractors.size() + 1, seed);
  return out;
}

}  // namespace lqg
