#include "lectureqg/review.h"

#include <algorithm>
#include <cctype>
#include <set>

#include "lectureqg/error.h"
#include "lectureqg/util.h"

namespace lqg {

using json = nlohmann::json;

std::string_view question_status_name(QuestionStatus s) {
  switch (s) {
    case QuestionStatus::kGenerated: return "generated";
    case QuestionStatus::kEdited: return "edited";
    case QuestionStatus::kAccepted: return "accepted";
    case QuestionStatus::kDiscarded: return "discarded";
  }
  return "generated";
}

QuestionStatus parse_question_status(std::string_view name) {
  if (name == "generated") return QuestionStatus::kGenerated;
  if (name == "edited") return QuestionStatus::kEdited;
  if (name == "accepted") return QuestionStatus::kAccepted;
  if (name == "discarded") return QuestionStatus::kDiscarded;
  throw Error(ErrorCode::kMalformedDocument,
              "unknown question status '" + std::string(name) + "'");
}

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kGood: return "Good";
    case Verdict::kAverage: return "Average";
    case Verdict::kBad: return "Bad";
  }
  return "Good";
}

Verdict parse_verdict(std::string_view name) {
  std::string l = to_lower(trim(name));
  if (l == "good") return Verdict::kGood;
  if (l == "average") return Verdict::kAverage;
  if (l == "bad") return Verdict::kBad;
  throw Error(ErrorCode::kInvalidArgument,
              "verdict must be Good, Average or Bad, got '" +
                  std::string(name) + "'");
}

const QuestionEntry& QuestionSet::at_rank(int rank) const {
  if (rank < 1 || static_cast<size_t>(rank) > questions.size()) {
    throw Error(ErrorCode::kNotFound,
                "question set " + set_id + " has no rank " +
                    std::to_string(rank));
  }
  return questions[static_cast<size_t>(rank - 1)];
}

// -- JSON --------------------------------------------------------------------

namespace {

json keyword_to_json(const KeywordRef& k) {
  return {{"phrase", k.phrase}, {"origin", keyword_origin_name(k.origin)}};
}

KeywordRef keyword_from_json(const json& j) {
  return {j.at("phrase").get<std::string>(),
          parse_keyword_origin(j.at("origin").get<std::string>())};
}

}  // namespace

json question_set_to_json(const QuestionSet& s) {
  json questions = json::array();
  for (const QuestionEntry& q : s.questions) {
    json versions = json::array();
    for (const QuestionVersion& v : q.versions) {
      versions.push_back({{"version_no", v.version_no},
                          {"payload", payload_to_json(v.payload)},
                          {"edited_at", v.edited_at},
                          {"author", v.author}});
    }
    json e = {{"rank", q.rank},
              {"confidence", q.confidence},
              {"source", question_source_name(q.source)},
              {"status", question_status_name(q.status)},
              {"versions", versions}};
    if (!q.group.empty()) e["group"] = q.group;
    questions.push_back(std::move(e));
  }
  json keywords = json::array();
  for (const KeywordRef& k : s.keywords) keywords.push_back(keyword_to_json(k));
  json j = {{"set_id", s.set_id},
            {"segment_id", s.segment_id},
            {"video_id", s.video_id},
            {"qtype", question_type_name(s.qtype)},
            {"keyword", s.keyword ? keyword_to_json(*s.keyword) : json(nullptr)},
            {"keywords", keywords},
            {"segment_version", s.segment_version},
            {"summary_version", s.summary_version},
            {"seed", s.seed},
            {"saq_set_id", s.saq_set_id},
            {"stale", s.stale},
            {"warnings", s.warnings},
            {"created_at", s.created_at},
            {"questions", questions}};
  if (s.revision > 0) j["revision"] = s.revision;
  return j;
}

QuestionSet question_set_from_json(const json& j) {
  try {
    QuestionSet s;
    s.set_id = j.at("set_id").get<std::string>();
    s.segment_id = j.at("segment_id").get<std::string>();
    s.video_id = j.value("video_id", "");
    s.qtype = parse_question_type(j.at("qtype").get<std::string>());
    if (j.contains("keyword") && !j["keyword"].is_null()) {
      s.keyword = keyword_from_json(j["keyword"]);
    }
    for (const json& k : j.value("keywords", json::array())) {
      s.keywords.push_back(keyword_from_json(k));
    }
    s.segment_version = j.value("segment_version", 0);
    s.summary_version = j.value("summary_version", 0);
    s.seed = j.value("seed", uint64_t{0});
    s.saq_set_id = j.value("saq_set_id", "");
    s.stale = j.value("stale", false);
    s.warnings = j.value("warnings", std::vector<std::string>{});
    s.created_at = j.value("created_at", "");
    s.revision = j.value("revision", int64_t{0});
    for (const json& e : j.at("questions")) {
      QuestionEntry q;
      q.rank = e.at("rank").get<int>();
      q.confidence = e.at("confidence").get<double>();
      q.source = parse_question_source(e.at("source").get<std::string>());
      q.status = parse_question_status(e.at("status").get<std::string>());
      q.group = e.value("group", "");
      for (const json& v : e.at("versions")) {
        q.versions.push_back({v.at("version_no").get<int>(),
                              payload_from_json(s.qtype, v.at("payload")),
                              v.at("edited_at").get<std::string>(),
                              v.at("author").get<std::string>()});
      }
      if (q.versions.empty()) {
        throw Error(ErrorCode::kMalformedDocument, "question without versions");
      }
      s.questions.push_back(std::move(q));
    }
    return s;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedDocument,
                std::string("bad question set document: ") + e.what());
  }
}

QuestionSet make_question_set(std::string set_id, std::string segment_id,
                              std::string video_id, QuestionType qtype,
                              const std::vector<GeneratedQuestion>& ranked,
                              const std::string& author, TimePoint now) {
  QuestionSet s;
  s.set_id = std::move(set_id);
  s.segment_id = std::move(segment_id);
  s.video_id = std::move(video_id);
  s.qtype = qtype;
  s.created_at = format_utc(now);
  for (size_t i = 0; i < ranked.size(); ++i) {
    const GeneratedQuestion& g = ranked[i];
    if (payload_type(g.payload) != qtype) {
      throw Error(ErrorCode::kInvalidArgument, "question type mismatch");
    }
    QuestionEntry q;
    q.rank = static_cast<int>(i) + 1;
    q.confidence = g.confidence;
    q.source = g.source;
    q.versions.push_back({1, g.payload, s.created_at, author});
    s.questions.push_back(std::move(q));
  }
  return s;
}

void save_question_set(Store& store, QuestionSet& set) {
  require_valid_id(set.set_id, "question set id");
  json stored = store.create(Collection::kQuestions, set.set_id,
                             question_set_to_json(set));
  set.revision = stored.value("revision", int64_t{1});
}

QuestionSet load_question_set(const Store& store, const std::string& set_id) {
  return question_set_from_json(
      store.read_required(Collection::kQuestions, set_id));
}

std::vector<QuestionSet> list_question_sets(const Store& store) {
  std::vector<QuestionSet> out;
  for (const std::string& id : store.list_ids(Collection::kQuestions)) {
    if (auto j = store.read(Collection::kQuestions, id)) {
      out.push_back(question_set_from_json(*j));
    }
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const QuestionSet& a, const QuestionSet& b) {
                     return a.created_at < b.created_at;
                   });
  return out;
}

// -- Edits -------------------------------------------------------------------

namespace {

bool ends_with_question_mark(const std::string& s) {
  std::string t = trim(s);
  return !t.empty() && t.back() == '?';
}

std::string required_text(const std::optional<std::string>& v,
                          const std::string& current, const char* what) {
  if (!v) return current;
  std::string t = trim(*v);
  if (t.empty()) {
    throw Error(ErrorCode::kInvalidArgument, std::string(what) + " is empty");
  }
  return t;
}

void reject(bool present, const char* field, QuestionType t) {
  if (present) {
    throw Error(ErrorCode::kInvalidAnswerForType,
                std::string(field) + " does not apply to " +
                    std::string(question_type_name(t)) + " questions");
  }
}

QuestionPayload apply_edit(const QuestionSet& set, const QuestionEntry& entry,
                           const QuestionEdit& edit,
                           std::vector<std::string>& warnings) {
  const QuestionType t = set.qtype;
  QuestionPayload next = entry.head();
  switch (t) {
    case QuestionType::kSaq: {
      reject(edit.answers.has_value(), "answers", t);
      reject(edit.distractors.has_value(), "distractors", t);
      auto& p = std::get<SaqPayload>(next);
      p.question_text = required_text(edit.text, p.question_text, "question");
      if (edit.answer) {
        std::string a = trim(*edit.answer);
        if (a.empty()) {
          throw Error(ErrorCode::kInvalidAnswerForType, "answer is empty");
        }
        p.answer = a;
      }
      break;
    }
    case QuestionType::kBlq: {
      reject(edit.answers.has_value(), "answers", t);
      reject(edit.distractors.has_value(), "distractors", t);
      auto& p = std::get<BlqPayload>(next);
      p.question_text = required_text(edit.text, p.question_text, "question");
      if (edit.answer) {
        try {
          p.answer = parse_yes_no(*edit.answer);
        } catch (const Error&) {
          throw Error(ErrorCode::kInvalidAnswerForType,
                      "boolean answer must be yes or no, got '" +
                          *edit.answer + "'");
        }
      }
      break;
    }
    case QuestionType::kGfq: {
      reject(edit.answer.has_value(), "answer", t);
      reject(edit.distractors.has_value(), "distractors", t);
      auto& p = std::get<GfqPayload>(next);
      p.gapped_text = required_text(edit.text, p.gapped_text, "gapped text");
      if (edit.answers) p.answers = *edit.answers;
      validate_gfq(p);
      break;
    }
    case QuestionType::kMcq: {
      reject(edit.answers.has_value(), "answers", t);
      auto& p = std::get<McqPayload>(next);
      p.question_text = required_text(edit.text, p.question_text, "question");
      if (edit.answer) p.correct_answer = trim(*edit.answer);
      if (edit.distractors) {
        std::vector<std::string> d;
        for (const std::string& x : *edit.distractors) d.push_back(trim(x));
        if (d.size() != p.distractors.size()) {
          p.option_order = seeded_permutation(
              d.size() + 1, set.seed + static_cast<uint64_t>(entry.rank));
        }
        p.distractors = std::move(d);
      }
      validate_mcq(p);
      break;
    }
  }
  if (t != QuestionType::kGfq) {
    const std::string& text = std::visit(
        [](const auto& v) -> const std::string& {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, GfqPayload>) {
            return v.gapped_text;
          } else {
            return v.question_text;
          }
        },
        next);
    if (!ends_with_question_mark(text)) {
      warnings.push_back("question text does not end with '?'");
    }
  }
  return next;
}

bool same_payload(const QuestionPayload& a, const QuestionPayload& b) {
  return payload_to_json(a) == payload_to_json(b);
}

QuestionSet set_status(Store& store, const std::string& set_id,
                       const std::vector<int>& ranks, QuestionStatus status) {
  QuestionSet out;
  store.update(Collection::kQuestions, set_id, [&](json& doc) {
    QuestionSet s = question_set_from_json(doc);
    for (int r : ranks) s.at_rank(r);
    for (int r : ranks) s.questions[static_cast<size_t>(r - 1)].status = status;
    const int64_t revision = s.revision;
    doc = question_set_to_json(s);
    doc["revision"] = revision;
  });
  return load_question_set(store, set_id);
}

}  // namespace

EditResult edit_question(Store& store, const std::string& set_id, int rank,
                         const QuestionEdit& edit, const std::string& author,
                         std::optional<int64_t> expected_revision) {
  require_valid_id(set_id, "question set id");
  EditResult result;
  const QuestionSet current = load_question_set(store, set_id);
  const QuestionEntry& entry = current.at_rank(rank);
  QuestionPayload next = apply_edit(current, entry, edit, result.warnings);
  if (same_payload(next, entry.head())) {
    result.set = current;
    return result;
  }

  const std::string stamp = format_utc(store.now());
  store.update(
      Collection::kQuestions, set_id,
      [&](json& doc) {
        QuestionSet s = question_set_from_json(doc);
        QuestionEntry& q = s.questions[static_cast<size_t>(rank - 1)];
        std::string at = std::max(stamp, q.versions.back().edited_at);
        q.versions.push_back(
            {q.versions.back().version_no + 1, next, at, author});
        if (q.status != QuestionStatus::kAccepted) {
          q.status = QuestionStatus::kEdited;
        }
        const int64_t revision = s.revision;
        doc = question_set_to_json(s);
        doc["revision"] = revision;
      },
      expected_revision);
  result.set = load_question_set(store, set_id);
  return result;
}

QuestionSet accept_questions(Store& store, const std::string& set_id,
                             const std::vector<int>& ranks,
                             const std::string& /*author*/) {
  require_valid_id(set_id, "question set id");
  return set_status(store, set_id, ranks, QuestionStatus::kAccepted);
}

QuestionSet discard_questions(Store& store, const std::string& set_id,
                              const std::vector<int>& ranks,
                              const std::string& /*author*/) {
  require_valid_id(set_id, "question set id");
  return set_status(store, set_id, ranks, QuestionStatus::kDiscarded);
}

// -- Ratings -----------------------------------------------------------------

json rating_to_json(const Rating& r) {
  json j = {{"rating_id", r.rating_id},
            {"question_set_id", r.question_set_id},
            {"qtype", question_type_name(r.qtype)},
            {"verdict", verdict_name(r.verdict)},
            {"best_question_rank", r.best_question_rank
                                       ? json(*r.best_question_rank)
                                       : json(nullptr)},
            {"rater", r.rater},
            {"rated_at", r.rated_at},
            {"supersedes", r.supersedes ? json(*r.supersedes) : json(nullptr)},
            {"segment_id", r.segment_id},
            {"summary_version",
             r.summary_version ? json(*r.summary_version) : json(nullptr)},
            {"keyword", r.keyword ? keyword_to_json(*r.keyword) : json(nullptr)}};
  return j;
}

Rating rating_from_json(const json& j) {
  try {
    Rating r;
    r.rating_id = j.at("rating_id").get<std::string>();
    r.question_set_id = j.at("question_set_id").get<std::string>();
    r.qtype = parse_question_type(j.at("qtype").get<std::string>());
    r.verdict = parse_verdict(j.at("verdict").get<std::string>());
    if (j.contains("best_question_rank") && !j["best_question_rank"].is_null()) {
      r.best_question_rank = j["best_question_rank"].get<int>();
    }
    r.rater = j.value("rater", "");
    r.rated_at = j.at("rated_at").get<std::string>();
    if (j.contains("supersedes") && !j["supersedes"].is_null()) {
      r.supersedes = j["supersedes"].get<std::string>();
    }
    r.segment_id = j.value("segment_id", "");
    if (j.contains("summary_version") && !j["summary_version"].is_null()) {
      r.summary_version = j["summary_version"].get<int>();
    }
    if (j.contains("keyword") && !j["keyword"].is_null()) {
      r.keyword = keyword_from_json(j["keyword"]);
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kMalformedDocument,
                std::string("bad rating document: ") + e.what());
  }
}

namespace {

std::string rating_prefix(const std::string& set_id) { return set_id + "-r"; }

// Sequence number of a rating id, or 0 when it is not one of the set's.
long rating_seq(const std::string& rating_id, const std::string& set_id) {
  const std::string prefix = rating_prefix(set_id);
  if (rating_id.compare(0, prefix.size(), prefix) != 0) return 0;
  std::string digits = rating_id.substr(prefix.size());
  if (digits.empty() || digits.size() > 9 ||
      !std::all_of(digits.begin(), digits.end(), ::isdigit)) {
    return 0;
  }
  return std::stol(digits);
}

}  // namespace

Rating rate_question_set(Store& store, const std::string& set_id,
                         Verdict verdict, std::optional<int> best_rank,
                         const std::string& rater,
                         std::optional<std::string> supersedes) {
  require_valid_id(set_id, "question set id");
  const QuestionSet set = load_question_set(store, set_id);
  const bool needs_best =
      set.qtype == QuestionType::kSaq || set.qtype == QuestionType::kMcq;
  if (best_rank) {
    if (verdict != Verdict::kGood) {
      throw Error(ErrorCode::kInvalidArgument,
                  "a best question is only chosen with a Good verdict");
    }
    if (*best_rank < 1 || *best_rank > static_cast<int>(set.questions.size())) {
      throw Error(ErrorCode::kInvalidArgument,
                  "best_question_rank " + std::to_string(*best_rank) +
                      " is outside 1.." + std::to_string(set.questions.size()));
    }
  } else if (verdict == Verdict::kGood && needs_best) {
    throw Error(ErrorCode::kMissingBestQuestion,
                "a Good rating of a " +
                    std::string(question_type_name(set.qtype)) +
                    " set must name the best question");
  }
  if (supersedes) {
    Rating old = rating_from_json(
        store.read_required(Collection::kRatings, *supersedes));
    if (old.question_set_id != set_id) {
      throw Error(ErrorCode::kInvalidArgument,
                  "rating " + *supersedes + " belongs to another set");
    }
  }

  Rating r;
  r.question_set_id = set_id;
  r.qtype = set.qtype;
  r.verdict = verdict;
  r.best_question_rank = best_rank;
  r.rater = rater;
  r.supersedes = std::move(supersedes);
  r.segment_id = set.segment_id;
  if (set.qtype == QuestionType::kGfq) r.summary_version = set.summary_version;
  r.keyword = set.keyword;

  for (int attempt = 0; attempt < 64; ++attempt) {
    long next = 0;
    for (const std::string& id : store.list_ids(Collection::kRatings)) {
      next = std::max(next, rating_seq(id, set_id));
    }
    r.rating_id = rating_prefix(set_id) + std::to_string(next + 1);
    r.rated_at = format_utc(store.now());
    try {
      store.create(Collection::kRatings, r.rating_id, rating_to_json(r));
      return r;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kAlreadyExists) throw;
    }
  }
  throw Error(ErrorCode::kVersionConflict,
              "could not allocate a rating id for " + set_id);
}

std::vector<Rating> list_ratings(const Store& store) {
  std::vector<Rating> out;
  for (const std::string& id : store.list_ids(Collection::kRatings)) {
    if (auto j = store.read(Collection::kRatings, id)) {
      out.push_back(rating_from_json(*j));
    }
  }
  return out;
}

std::vector<Rating> effective_ratings(const std::vector<Rating>& all) {
  std::map<std::string, const Rating*> latest;
  auto newer = [](const Rating& a, const Rating& b) {
    if (a.rated_at != b.rated_at) return a.rated_at > b.rated_at;
    long sa = rating_seq(a.rating_id, a.question_set_id);
    long sb = rating_seq(b.rating_id, b.question_set_id);
    if (sa != sb) return sa > sb;
    return a.rating_id > b.rating_id;
  };
  for (const Rating& r : all) {
    auto it = latest.find(r.question_set_id);
    if (it == latest.end() || newer(r, *it->second)) {
      latest[r.question_set_id] = &r;
    }
  }
  std::vector<Rating> out;
  for (const auto& [id, r] : latest) out.push_back(*r);
  return out;
}

std::optional<Rating> effective_rating(const Store& store,
                                       const std::string& set_id) {
  std::vector<Rating> mine;
  for (const Rating& r : list_ratings(store)) {
    if (r.question_set_id == set_id) mine.push_back(r);
  }
  std::vector<Rating> eff = effective_ratings(mine);
  if (eff.empty()) return std::nullopt;
  return eff.front();
}

// -- Export ------------------------------------------------------------------

json export_segment(const Store& store, const std::string& segment_id) {
  require_valid_id(segment_id, "segment id");
  if (!store.exists(Collection::kSegments, segment_id)) {
    throw Error(ErrorCode::kNotFound, "segments/" + segment_id);
  }
  json out = json::array();
  for (const QuestionSet& s : list_question_sets(store)) {
    if (s.segment_id != segment_id) continue;
    for (const QuestionEntry& q : s.questions) {
      if (q.status != QuestionStatus::kAccepted) continue;
      json payload = payload_to_json(q.head());
      json item = {{"question_set_id", s.set_id},
                   {"type", question_type_name(s.qtype)},
                   {"rank", q.rank}};
      switch (s.qtype) {
        case QuestionType::kSaq:
          item["text"] = payload["question_text"];
          item["answer"] = payload["answer"];
          break;
        case QuestionType::kBlq:
          item["text"] = payload["question_text"];
          item["answer"] = payload["answer"];
          break;
        case QuestionType::kGfq:
          item["text"] = payload["gapped_text"];
          item["answers"] = payload["answers"];
          break;
        case QuestionType::kMcq:
          item["text"] = payload["question_text"];
          item["answer"] = payload["correct_answer"];
          item["options"] = payload["options"];
          break;
      }
      json prov = {{"segment_id", s.segment_id},
                   {"video_id", s.video_id},
                   {"segment_version", s.segment_version},
                   {"question_version", q.versions.back().version_no},
                   {"generated_by", question_source_name(q.source)},
                   {"stale", s.stale}};
      if (s.qtype == QuestionType::kBlq || s.qtype == QuestionType::kGfq) {
        prov["summary_version"] = s.summary_version;
      }
      if (s.keyword) prov["keyword"] = keyword_to_json(*s.keyword);
      if (!s.saq_set_id.empty()) prov["saq_set_id"] = s.saq_set_id;
      item["provenance"] = std::move(prov);
      out.push_back(std::move(item));
    }
  }
  return out;
}

}  // namespace lqg
