#include "lectureqg/textkit.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "lectureqg/error.h"
#include "lectureqg/util.h"

namespace lqg {

namespace {

// Default word lists. Keys match the override file names (minus ".txt").
// Verb lines are "base [past [participle]]"; regular forms are generated.
const std::map<std::string, std::string>& default_lists() {
  static const std::map<std::string, std::string> lists = {
      {"determiners",
       "the a an this these those each every some any no all both either "
       "neither my your his her its our their another such many much few "
       "several most"},
      {"prepositions",
       "of in on at by for with from to into onto about above across after "
       "against along among around as before behind below beneath beside "
       "between beyond during except inside like near off outside over per "
       "since than through throughout toward towards under until upon via "
       "within without"},
      {"pronouns",
       "i you he she it we they me him us them who whom whose which what that "
       "myself yourself himself herself itself ourselves themselves something "
       "anything everything nothing someone anyone everyone somebody anybody "
       "everybody there"},
      {"auxiliaries",
       "is are was were be been being am has have had do does did can could "
       "will would shall should may might must"},
      {"other",
       "and or but nor so yet if because although though while whereas when "
       "where why how then also not very too just only even still already now "
       "here always never often sometimes usually again however therefore "
       "thus hence indeed perhaps maybe well quite rather almost ago yes okay "
       "ok oh um uh yeah whether etc instead else once"},
      {"verbs",
       "accept\nachieve\nadd\nallow\napply\nargue\nask\nbecome became become\n"
       "begin began begun\nbelieve\nbring brought brought\nbuild built built\n"
       "buy bought bought\ncall\ncarry\ncause\nchoose chose chosen\n"
       "come came come\ncompare\nconsider\ncontain\ncontinue\ncontribute\n"
       "control controlled controlled\ncreate\ndecide\ndefine\ndemonstrate\n"
       "depend\ndescribe\ndesign\ndetermine\ndevelop\ndiscover\ndiscuss\n"
       "distribute\ndraw drew drawn\ndrive drove driven\neat ate eaten\nenable\n"
       "encourage\nensure\nestablish\nestimate\nexamine\nexist\nexplain\n"
       "explore\nexpress\nextend\nfall fell fallen\nfeel felt felt\n"
       "find found found\nfocus\nfollow\nforget forgot forgotten\ngenerate\n"
       "get got gotten\ngive gave given\ngo went gone\ngrow grew grown\n"
       "happen\nhear heard heard\nhelp\nhold held held\nidentify\nimplement\n"
       "improve\ninclude\nincrease\nindicate\ninfluence\nintroduce\ninvent\n"
       "involve\nkeep kept kept\nknow knew known\nlead led led\nlearn\n"
       "leave left left\nlet let let\nlive\nlook\nlose lost lost\nmaintain\n"
       "make made made\nmanage\nmean meant meant\nmeasure\nmeet met met\nmove\n"
       "need\nobserve\nobtain\noccur occurred occurred\noffer\noperate\n"
       "pay paid paid\nperform\nplan planned planned\nplay\nprefer preferred "
       "preferred\nprevent\nproduce\nprotect\nprovide\npublish\nput put put\n"
       "reach\nread read read\nreceive\nreduce\nrefer referred referred\n"
       "reflect\nrelease\nremain\nremember\nremove\nreplace\nreport\n"
       "represent\nrequire\nreveal\nrise rose risen\nrun ran run\nsay said said\n"
       "see saw seen\nseem\nsell sold sold\nsend sent sent\nserve\nset set set\n"
       "share\nshow showed shown\nsit sat sat\nsolve\nspeak spoke spoken\n"
       "spend spent spent\nstand stood stood\nstart\nstay\nstop stopped stopped\n"
       "study\nsuggest\ntake took taken\ntalk\nteach taught taught\n"
       "tell told told\ntend\nthink thought thought\ntry\nturn\n"
       "understand understood understood\nuse\nvary\nwant\nwatch\nwin won won\n"
       "work\nwrite wrote written"},
      {"adjectives",
       "open free new old good bad great small large big little high low long "
       "short important different same main major other first last next early "
       "late green red blue white black yellow simple complex easy hard clear "
       "common general specific public private social real true false whole "
       "full key basic available possible modern current recent similar "
       "various certain strong young human local global national "
       "international political economic natural legal financial previous "
       "final entire own right wrong best better worse worst able likely "
       "necessary popular proprietary commercial digital online"},
      {"number_words",
       "zero one two three four five six seven eight nine ten eleven twelve "
       "thirteen fourteen fifteen sixteen seventeen eighteen nineteen twenty "
       "thirty forty fifty sixty seventy eighty ninety hundred thousand "
       "million billion trillion dozen"},
      {"units",
       "second seconds minute minutes hour hours day days week weeks month "
       "months year years decade decades century centuries millennium "
       "millennia"},
      {"months",
       "january february march april may june july august september october "
       "november december"},
      {"person_titles",
       "mr mr. mrs mrs. ms ms. dr dr. prof prof. professor president sir "
       "madam lord lady king queen minister senator judge captain doctor"},
      {"abbreviations",
       "e.g.\ni.e.\ndr.\nmr.\nms.\nmrs.\nprof.\netc.\nvs.\njr.\nsr.\nst.\n"
       "fig.\ninc.\nltd."},
      {"stopwords",
       "a about above after again against all am an and any are as at be "
       "because been before being below between both but by can could did do "
       "does doing down during each few for from further had has have having "
       "he her here hers herself him himself his how i if in into is it its "
       "itself just me more most my myself no nor not now of off on once only "
       "or other our ours ourselves out over own same she should so some such "
       "than that the their theirs them themselves then there these they this "
       "those through to too under until up very was we were what when where "
       "which while who whom why will with would you your yours yourself "
       "yourselves also may might must shall um uh okay ok yeah like really "
       "actually basically going get got let lets thing things"},
  };
  return lists;
}

std::vector<std::string> split_entries(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  bool multiline = text.find('\n') != std::string::npos;
  if (multiline) {
    while (std::getline(in, line)) {
      std::string t = trim(line);
      if (!t.empty() && t.front() != '#') out.push_back(t);
    }
  } else {
    std::string word;
    while (in >> word) out.push_back(word);
  }
  return out;
}

std::string third_person(const std::string& base) {
  auto ends = [&](std::string_view s) {
    return base.size() >= s.size() &&
           base.compare(base.size() - s.size(), s.size(), s) == 0;
  };
  if (ends("s") || ends("x") || ends("z") || ends("ch") || ends("sh") ||
      ends("o")) {
    return base + "es";
  }
  if (base.size() > 1 && base.back() == 'y' &&
      std::string_view("aeiou").find(base[base.size() - 2]) ==
          std::string_view::npos) {
    return base.substr(0, base.size() - 1) + "ies";
  }
  return base + "s";
}

std::string past_regular(const std::string& base) {
  if (base.back() == 'e') return base + "d";
  if (base.size() > 1 && base.back() == 'y' &&
      std::string_view("aeiou").find(base[base.size() - 2]) ==
          std::string_view::npos) {
    return base.substr(0, base.size() - 1) + "ied";
  }
  return base + "ed";
}

std::string gerund(const std::string& base) {
  if (base.size() > 2 && base.compare(base.size() - 2, 2, "ie") == 0) {
    return base.substr(0, base.size() - 2) + "ying";
  }
  if (base.size() > 2 && base.back() == 'e' && base[base.size() - 2] != 'e') {
    return base.substr(0, base.size() - 1) + "ing";
  }
  return base + "ing";
}

bool has_word_char(std::string_view s) {
  return std::any_of(s.begin(), s.end(), is_word_char);
}

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
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

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }
bool is_closer(char c) {
  return c == '"' || c == '\'' || c == ')' || c == ']';
}

}  // namespace

std::string_view pos_name(Pos pos) {
  switch (pos) {
    case Pos::kDet: return "DET";
    case Pos::kAdj: return "ADJ";
    case Pos::kNoun: return "NOUN";
    case Pos::kPropn: return "PROPN";
    case Pos::kVerb: return "VERB";
    case Pos::kAux: return "AUX";
    case Pos::kNum: return "NUM";
    case Pos::kPron: return "PRON";
    case Pos::kAdp: return "ADP";
    case Pos::kPunct: return "PUNCT";
    case Pos::kOther: return "OTHER";
  }
  return "OTHER";
}

std::string_view candidate_kind_name(CandidateKind kind) {
  return kind == CandidateKind::kNounPhrase ? "noun_phrase" : "named_entity";
}

CandidateKind parse_candidate_kind(std::string_view name) {
  if (name == "noun_phrase") return CandidateKind::kNounPhrase;
  if (name == "named_entity") return CandidateKind::kNamedEntity;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown candidate kind '" + std::string(name) + "'");
}

std::string_view keyword_origin_name(KeywordOrigin origin) {
  return origin == KeywordOrigin::kRecommended ? "recommended" : "custom";
}

KeywordOrigin parse_keyword_origin(std::string_view name) {
  if (name == "recommended") return KeywordOrigin::kRecommended;
  if (name == "custom") return KeywordOrigin::kCustom;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown keyword origin '" + std::string(name) + "'");
}

// -- Lexicon -----------------------------------------------------------------

std::vector<std::string> read_word_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot read word list " +
                                         path.filename().string());
  }
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (!t.empty() && t.front() != '#') out.push_back(to_lower(t));
  }
  return out;
}

std::vector<std::string> Lexicon::list_names() {
  std::vector<std::string> names;
  for (const auto& [name, unused] : default_lists()) names.push_back(name);
  return names;
}

const Lexicon& Lexicon::defaults() {
  static const Lexicon lex = [] {
    Lexicon l;
    for (const auto& [name, body] : default_lists()) {
      l.lists_[name] = split_entries(body);
    }
    l.rebuild();
    return l;
  }();
  return lex;
}

void Lexicon::load_overrides(const std::filesystem::path& dir) {
  if (lists_.empty()) *this = defaults();
  for (const std::string& name : list_names()) {
    std::filesystem::path file = dir / (name + ".txt");
    if (std::filesystem::exists(file)) lists_[name] = read_word_list(file);
  }
  rebuild();
}

void Lexicon::rebuild() {
  closed_.clear();
  verb_forms_.clear();
  past_forms_.clear();
  auto tag_all = [&](const char* list, Pos pos) {
    for (const std::string& w : lists_[list]) closed_[to_lower(w)] = pos;
  };
  tag_all("determiners", Pos::kDet);
  tag_all("prepositions", Pos::kAdp);
  tag_all("pronouns", Pos::kPron);
  tag_all("auxiliaries", Pos::kAux);
  tag_all("other", Pos::kOther);

  for (const std::string& line : lists_["verbs"]) {
    std::istringstream in(to_lower(line));
    std::vector<std::string> forms;
    std::string f;
    while (in >> f) forms.push_back(f);
    if (forms.empty()) continue;
    const std::string& base = forms[0];
    verb_forms_[base] = base;
    verb_forms_[third_person(base)] = base;
    verb_forms_[gerund(base)] = base;
    if (forms.size() == 1) {
      std::string past = past_regular(base);
      verb_forms_[past] = base;
      past_forms_.insert(past);
    }
    for (size_t i = 1; i < forms.size(); ++i) {
      verb_forms_[forms[i]] = base;
      past_forms_.insert(forms[i]);
    }
  }
  auto fill = [&](const char* list, std::unordered_set<std::string>& set) {
    set.clear();
    for (const std::string& w : lists_[list]) set.insert(to_lower(w));
  };
  fill("adjectives", adjectives_);
  fill("number_words", number_words_);
  fill("units", units_);
  fill("months", months_);
  fill("person_titles", titles_);
  fill("stopwords", stopwords_);
  abbreviations_.clear();
  for (const std::string& w : lists_["abbreviations"]) {
    abbreviations_.push_back(to_lower(w));
  }
  // Longest first so "mrs." wins over "mr." style prefixes.
  std::sort(abbreviations_.begin(), abbreviations_.end(),
            [](const std::string& a, const std::string& b) {
              return a.size() != b.size() ? a.size() > b.size() : a < b;
            });
}

bool Lexicon::closed_class(const std::string& lower, Pos* pos) const {
  auto it = closed_.find(lower);
  if (it == closed_.end()) return false;
  *pos = it->second;
  return true;
}

bool Lexicon::is_verb(const std::string& lower) const {
  return verb_forms_.count(lower) > 0;
}

std::string Lexicon::verb_base(const std::string& lower) const {
  auto it = verb_forms_.find(lower);
  return it == verb_forms_.end() ? std::string() : it->second;
}

bool Lexicon::is_past_form(const std::string& lower) const {
  return past_forms_.count(lower) > 0;
}

bool Lexicon::is_adjective(const std::string& l) const {
  return adjectives_.count(l) > 0;
}
bool Lexicon::is_number_word(const std::string& l) const {
  return number_words_.count(l) > 0;
}
bool Lexicon::is_unit(const std::string& l) const { return units_.count(l) > 0; }
bool Lexicon::is_month(const std::string& l) const {
  return months_.count(l) > 0;
}
bool Lexicon::is_person_title(const std::string& l) const {
  return titles_.count(l) > 0;
}
bool Lexicon::is_abbreviation(const std::string& l) const {
  return std::find(abbreviations_.begin(), abbreviations_.end(), l) !=
         abbreviations_.end();
}
bool Lexicon::is_stopword(const std::string& l) const {
  return stopwords_.count(l) > 0;
}

// -- Sentences ---------------------------------------------------------------

std::vector<Sentence> split_sentences(std::string_view text,
                                      const Lexicon& lex) {
  std::vector<Sentence> out;
  auto emit = [&](size_t b, size_t e) {
    while (b < e && std::isspace(static_cast<unsigned char>(text[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(text[e - 1]))) --e;
    if (b < e) out.push_back({std::string(text.substr(b, e - b)), b, e});
  };

  size_t start = 0;
  size_t i = 0;
  while (i < text.size()) {
    if (!is_terminator(text[i])) {
      ++i;
      continue;
    }
    size_t run_begin = i;
    while (i < text.size() && is_terminator(text[i])) ++i;
    while (i < text.size() && is_closer(text[i])) ++i;
    size_t end = i;

    size_t j = i;
    while (j < text.size() && std::isspace(static_cast<unsigned char>(text[j]))) {
      ++j;
    }
    bool at_end = j == text.size();
    bool capital_follows = j > i && j < text.size() && is_upper(text[j]);
    if (!at_end && !capital_follows) continue;

    if (end - run_begin == 1 && text[run_begin] == '.') {
      // The whitespace-delimited word that ends in this period.
      size_t w = run_begin;
      while (w > start && !std::isspace(static_cast<unsigned char>(text[w - 1]))) {
        --w;
      }
      while (w < run_begin && (text[w] == '(' || text[w] == '"' ||
                               text[w] == '\'' || text[w] == '[')) {
        ++w;
      }
      std::string word = to_lower(text.substr(w, run_begin + 1 - w));
      if (lex.is_abbreviation(word) && !at_end) continue;
    }
    emit(start, end);
    start = end;
  }
  emit(start, text.size());
  return out;
}

// -- Tokens ------------------------------------------------------------------

std::vector<Token> tokenize(std::string_view text, const Lexicon& lex) {
  std::vector<Token> tokens;
  const size_t n = text.size();
  size_t i = 0;
  while (i < n) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    size_t b = i;
    if (is_word_char(c)) {
      bool matched_abbrev = false;
      for (const std::string& abbr : lex.abbreviations()) {
        if (abbr.size() <= n - i &&
            to_lower(text.substr(i, abbr.size())) == abbr &&
            (i + abbr.size() == n || !is_word_char(text[i + abbr.size()]))) {
          i += abbr.size();
          matched_abbrev = true;
          break;
        }
      }
      if (!matched_abbrev) {
        bool numeric = is_digit(c);
        while (i < n) {
          if (is_word_char(text[i])) {
            ++i;
            continue;
          }
          char d = text[i];
          bool inner = i + 1 < n && is_word_char(text[i + 1]);
          if (inner && (d == '-' || d == '\'')) {
            ++i;
            continue;
          }
          if (inner && numeric && (d == '.' || d == ',') &&
              is_digit(text[i + 1])) {
            ++i;
            continue;
          }
          break;
        }
      }
    } else {
      ++i;
    }
    tokens.push_back({std::string(text.substr(b, i - b)), b, i});
  }

  auto sentences = split_sentences(text, lex);
  size_t s = 0;
  bool pending = true;
  for (Token& t : tokens) {
    while (s < sentences.size() && t.begin >= sentences[s].end) {
      ++s;
      pending = true;
    }
    if (pending && has_word_char(t.text)) {
      t.sentence_initial = true;
      pending = false;
    }
  }
  return tokens;
}

void pos_tag(std::vector<Token>& tokens, const Lexicon& lex) {
  auto previous_content = [&](size_t i) -> const Token* {
    while (i > 0) {
      --i;
      const Token& p = tokens[i];
      if (p.pos == Pos::kOther && !p.sentence_initial) continue;
      return &p;
    }
    return nullptr;
  };

  std::vector<bool> defaulted(tokens.size(), false);
  for (size_t i = 0; i < tokens.size(); ++i) {
    Token& t = tokens[i];
    const Token* prev = i > 0 && !t.sentence_initial ? &tokens[i - 1] : nullptr;
    if (!has_word_char(t.text)) {
      t.pos = Pos::kPunct;
      continue;
    }
    std::string lower = to_lower(t.text);
    if (is_digit(t.text.front()) || lex.is_number_word(lower)) {
      t.pos = Pos::kNum;
      continue;
    }
    if (lex.is_abbreviation(lower)) {
      t.pos = lex.is_person_title(lower) && is_upper(t.text.front())
                  ? Pos::kPropn
                  : Pos::kOther;
      continue;
    }
    Pos closed;
    if (lex.closed_class(lower, &closed)) {
      t.pos = closed;
      continue;
    }
    if (is_upper(t.text.front()) && (!t.sentence_initial || all_caps(t.text))) {
      t.pos = Pos::kPropn;
      continue;
    }
    if (lex.is_verb(lower)) {
      bool after_to = prev != nullptr && to_lower(prev->text) == "to";
      bool nominal = prev != nullptr && !after_to &&
                     (prev->pos == Pos::kDet || prev->pos == Pos::kAdj ||
                      prev->pos == Pos::kAdp);
      t.pos = nominal ? Pos::kNoun : Pos::kVerb;
      continue;
    }
    if (lex.is_adjective(lower)) {
      t.pos = Pos::kAdj;
      continue;
    }
    if (ends_with(lower, "tion") || ends_with(lower, "sion") ||
        ends_with(lower, "ment") || ends_with(lower, "ness") ||
        ends_with(lower, "ity")) {
      t.pos = Pos::kNoun;
      continue;
    }
    if (ends_with(lower, "ly") && lower.size() > 3) {
      t.pos = Pos::kOther;
      continue;
    }
    const Token* pc = t.sentence_initial ? nullptr : previous_content(i);
    Pos before = pc != nullptr ? pc->pos : Pos::kPunct;
    if (lower.size() > 4 && ends_with(lower, "ed") && !ends_with(lower, "eed")) {
      if (before == Pos::kAux || before == Pos::kNoun ||
          before == Pos::kPropn || before == Pos::kPron) {
        t.pos = Pos::kVerb;
      } else {
        t.pos = Pos::kAdj;
      }
      continue;
    }
    if (lower.size() > 4 && ends_with(lower, "ing")) {
      t.pos = before == Pos::kAux || before == Pos::kPron ? Pos::kVerb
                                                          : Pos::kNoun;
      continue;
    }
    if (lower.size() > 5 &&
        (ends_with(lower, "ous") || ends_with(lower, "ful") ||
         ends_with(lower, "less") || ends_with(lower, "able") ||
         ends_with(lower, "ible") || ends_with(lower, "ive") ||
         ends_with(lower, "ical") || ends_with(lower, "al"))) {
      t.pos = Pos::kAdj;
      continue;
    }
    t.pos = Pos::kNoun;
    defaulted[i] = true;
  }

  // A capitalized sentence-initial word that fell through to the default and
  // runs straight into a proper noun is part of the name ("Linus Torvalds").
  for (size_t i = 0; i + 1 < tokens.size(); ++i) {
    Token& t = tokens[i];
    const Token& next = tokens[i + 1];
    if (defaulted[i] && t.sentence_initial && is_upper(t.text.front()) &&
        next.pos == Pos::kPropn && next.begin == t.end + 1) {
      t.pos = Pos::kPropn;
    }
  }

  // An unknown -s word between a noun and a determiner, pronoun or
  // preposition is the main verb when the sentence has none before it
  // ("free software respects the ...").
  bool seen_verb = false;
  for (size_t i = 0; i < tokens.size(); ++i) {
    Token& t = tokens[i];
    if (t.sentence_initial) seen_verb = false;
    if (t.pos == Pos::kVerb || t.pos == Pos::kAux) {
      seen_verb = true;
      continue;
    }
    if (seen_verb || !defaulted[i] || t.sentence_initial || i + 1 >= tokens.size()) {
      continue;
    }
    const std::string lower = to_lower(t.text);
    if (lower.size() < 4 || !ends_with(lower, "s") || ends_with(lower, "ss") ||
        ends_with(lower, "us") || ends_with(lower, "is")) {
      continue;
    }
    const Pos prev = tokens[i - 1].pos;
    const Pos next = tokens[i + 1].pos;
    if ((prev == Pos::kNoun || prev == Pos::kPropn) &&
        (next == Pos::kDet || next == Pos::kPron || next == Pos::kAdp ||
         next == Pos::kNum)) {
      t.pos = Pos::kVerb;
      seen_verb = true;
    }
  }
}

std::vector<Token> analyze(std::string_view text, const Lexicon& lex) {
  std::vector<Token> tokens = tokenize(text, lex);
  pos_tag(tokens, lex);
  return tokens;
}

// -- Occurrences -------------------------------------------------------------

std::vector<size_t> find_occurrences(std::string_view text,
                                     std::string_view phrase) {
  std::vector<size_t> out;
  if (phrase.empty() || phrase.size() > text.size()) return out;
  const std::string hay = to_lower(text);
  const std::string needle = to_lower(phrase);
  const bool check_left = is_word_char(needle.front());
  const bool check_right = is_word_char(needle.back());
  size_t pos = 0;
  while ((pos = hay.find(needle, pos)) != std::string::npos) {
    size_t end = pos + needle.size();
    bool left_ok = !check_left || pos == 0 || !is_word_char(hay[pos - 1]);
    bool right_ok = !check_right || end == hay.size() || !is_word_char(hay[end]);
    if (left_ok && right_ok) {
      out.push_back(pos);
      pos = end;
    } else {
      ++pos;
    }
  }
  return out;
}

// -- Candidates --------------------------------------------------------------

namespace {

struct Chunker {
  std::string_view text;
  const std::vector<Token>& tokens;
  const Lexicon& lex;

  // Tokens i-1 and i are adjacent within one sentence, separated by exactly
  // one space.
  bool joined(size_t i) const {
    if (i == 0 || i >= tokens.size() || tokens[i].sentence_initial) {
      return false;
    }
    return text.substr(tokens[i - 1].end, tokens[i].begin - tokens[i - 1].end) ==
           " ";
  }
  bool is(size_t i, Pos pos) const {
    return i < tokens.size() && tokens[i].pos == pos;
  }
  std::string lower(size_t i) const { return to_lower(tokens[i].text); }
  bool capitalized(size_t i) const { return is_upper(tokens[i].text.front()); }

  bool is_year(size_t i) const {
    const std::string& s = tokens[i].text;
    if (s.size() != 4 || !std::all_of(s.begin(), s.end(), is_digit)) {
      return false;
    }
    int y = std::stoi(s);
    return y >= 1000 && y <= 2100;
  }

  // End of a date/time/duration expression starting at i, or i.
  size_t temporal_end(size_t i) const {
    const size_t n = tokens.size();
    if (is(i, Pos::kNum)) {
      size_t k = i + 1;
      while (k < n && is(k, Pos::kNum) && joined(k)) ++k;
      if (k < n && joined(k) && lex.is_unit(lower(k))) {
        ++k;
        if (k < n && joined(k) && lower(k) == "ago") ++k;
        return k;
      }
      if (k < n && joined(k) &&
          (lower(k) == "am" || lower(k) == "pm" || lower(k) == "o'clock")) {
        return k + 1;
      }
    }
    size_t k = i;
    if (is(k, Pos::kNum) && k + 1 < n && joined(k + 1) &&
        lex.is_month(lower(k + 1)) && capitalized(k + 1)) {
      ++k;
    }
    if (k < n && lex.is_month(lower(k)) && capitalized(k) &&
        !(k == i && tokens[k].sentence_initial && lower(k) == "may")) {
      ++k;
      if (k < n && is(k, Pos::kNum) && joined(k)) ++k;
      if (k + 1 < n && tokens[k].text == "," && tokens[k].begin ==
          tokens[k - 1].end && is(k + 1, Pos::kNum) && joined(k + 1) &&
          is_year(k + 1)) {
        k += 2;
      }
      return k;
    }
    if (is(i, Pos::kNum) && is_year(i) && i > 0 && !tokens[i].sentence_initial) {
      static const char* kLeads[] = {"in",    "since",  "by",    "until",
                                     "from",  "before", "after", "during"};
      std::string prev = lower(i - 1);
      for (const char* lead : kLeads) {
        if (prev == lead) return i + 1;
      }
    }
    return i;
  }

  std::string span(size_t b, size_t e) const {
    return std::string(
        text.substr(tokens[b].begin, tokens[e - 1].end - tokens[b].begin));
  }
};

struct RawCandidate {
  std::string phrase;
  CandidateKind kind;
};

std::vector<RawCandidate> raw_candidates(std::string_view text,
                                         const std::vector<Token>& tokens,
                                         const Lexicon& lex) {
  Chunker ch{text, tokens, lex};
  const size_t n = tokens.size();
  std::vector<RawCandidate> out;
  std::vector<bool> consumed(n, false);

  for (size_t i = 0; i < n;) {
    size_t e = ch.temporal_end(i);
    if (e > i) {
      out.push_back({ch.span(i, e), CandidateKind::kNamedEntity});
      std::fill(consumed.begin() + static_cast<long>(i),
                consumed.begin() + static_cast<long>(e), true);
      i = e;
    } else {
      ++i;
    }
  }

  for (size_t i = 0; i < n;) {
    if (!ch.is(i, Pos::kPropn) || consumed[i]) {
      ++i;
      continue;
    }
    size_t e = i + 1;
    while (e < n && ch.is(e, Pos::kPropn) && !consumed[e] && ch.joined(e)) ++e;
    out.push_back({ch.span(i, e), CandidateKind::kNamedEntity});
    i = e;
  }

  auto nominal = [&](size_t k) {
    return ch.is(k, Pos::kNoun) || ch.is(k, Pos::kPropn);
  };
  for (size_t i = 0; i < n;) {
    if (consumed[i]) {
      ++i;
      continue;
    }
    // NUM+ NOUN+
    if (ch.is(i, Pos::kNum)) {
      size_t k = i + 1;
      while (k < n && ch.is(k, Pos::kNum) && ch.joined(k)) ++k;
      size_t m = k;
      while (m < n && ch.is(m, Pos::kNoun) && ch.joined(m)) ++m;
      if (m > k) {
        out.push_back({ch.span(i, m), CandidateKind::kNounPhrase});
        i = m;
        continue;
      }
    }
    // DET? ADJ* (NOUN|PROPN)+, stored without the determiner.
    size_t j = i;
    if (ch.is(j, Pos::kDet)) {
      if (j + 1 < n && ch.joined(j + 1)) {
        ++j;
      } else {
        ++i;
        continue;
      }
    }
    size_t body = j;
    while (j < n && ch.is(j, Pos::kAdj) && (j == body || ch.joined(j))) ++j;
    if (j > body && !(j < n && ch.joined(j))) {
      i = std::max(i + 1, j);
      continue;
    }
    size_t k = j;
    while (k < n && nominal(k) && (k == body || ch.joined(k))) ++k;
    if (k > j) {
      bool all_proper = true;
      for (size_t t = body; t < k; ++t) all_proper &= ch.is(t, Pos::kPropn);
      out.push_back({ch.span(body, k), all_proper
                                           ? CandidateKind::kNamedEntity
                                           : CandidateKind::kNounPhrase});
      i = k;
    } else {
      i = std::max(i + 1, j);
    }
  }
  return out;
}

}  // namespace

std::vector<KeywordCandidate> extract_candidates(std::string_view segment_text,
                                                 size_t limit,
                                                 const Lexicon& lex) {
  std::vector<Token> tokens = analyze(segment_text, lex);
  std::map<std::string, size_t> index;  // lower-cased phrase -> slot
  std::vector<KeywordCandidate> out;
  for (RawCandidate& raw : raw_candidates(segment_text, tokens, lex)) {
    std::string key = to_lower(raw.phrase);
    auto it = index.find(key);
    if (it != index.end()) {
      if (raw.kind == CandidateKind::kNamedEntity) {
        out[it->second].kind = CandidateKind::kNamedEntity;
      }
      continue;
    }
    std::vector<size_t> hits = find_occurrences(segment_text, raw.phrase);
    if (hits.empty()) continue;
    KeywordCandidate c;
    c.first_offset = hits.front();
    c.phrase = std::string(segment_text.substr(c.first_offset, raw.phrase.size()));
    c.kind = raw.kind;
    c.frequency = static_cast<int>(hits.size());
    c.origin = KeywordOrigin::kRecommended;
    index.emplace(std::move(key), out.size());
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(),
            [](const KeywordCandidate& a, const KeywordCandidate& b) {
              if (a.frequency != b.frequency) return a.frequency > b.frequency;
              if (a.first_offset != b.first_offset) {
                return a.first_offset < b.first_offset;
              }
              return a.phrase < b.phrase;
            });
  if (limit > 0 && out.size() > limit) out.resize(limit);
  return out;
}

CandidateKind classify_phrase(std::string_view phrase, const Lexicon& lex) {
  std::vector<Token> tokens = analyze(phrase, lex);
  if (tokens.empty()) return CandidateKind::kNounPhrase;
  Chunker ch{phrase, tokens, lex};
  if (ch.temporal_end(0) == tokens.size()) return CandidateKind::kNamedEntity;
  bool all_capitalized = std::all_of(
      tokens.begin(), tokens.end(),
      [](const Token& t) { return is_upper(t.text.front()); });
  return all_capitalized ? CandidateKind::kNamedEntity
                         : CandidateKind::kNounPhrase;
}

KeywordCandidate validate_custom_keyword(std::string_view segment_text,
                                         std::string_view phrase,
                                         const Lexicon& lex) {
  std::string p = trim(phrase);
  if (p.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "keyword phrase is empty");
  }
  std::vector<size_t> hits = find_occurrences(segment_text, p);
  if (hits.empty()) {
    throw Error(ErrorCode::kPhraseNotInSegment,
                "'" + p + "' does not occur in the segment");
  }
  KeywordCandidate c;
  c.phrase = p;
  c.kind = classify_phrase(p, lex);
  c.frequency = static_cast<int>(hits.size());
  c.first_offset = hits.front();
  c.origin = KeywordOrigin::kCustom;
  return c;
}

std::string join_tokens(const std::vector<std::string>& words) {
  static const std::string_view kAttachLeft = ",.;:!?)]}%";
  std::string out;
  bool glue_next = false;
  for (const std::string& w : words) {
    if (w.empty()) continue;
    bool attach = w.size() == 1 && kAttachLeft.find(w[0]) != std::string::npos;
    attach = attach || w == "'s" || w == "n't";
    if (!out.empty() && !attach && !glue_next) out += ' ';
    out += w;
    glue_next = w == "(" || w == "[" || w == "{";
  }
  return out;
}

}  // namespace lqg
