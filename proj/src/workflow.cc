#include "lectureqg/workflow.h"

#include <algorithm>

#include "lectureqg/distract.h"
#include "lectureqg/error.h"
#include "lectureqg/qgen.h"
#include "lectureqg/util.h"

namespace lqg {

using json = nlohmann::json;

namespace {

bool is_provider_error(const Error& e) {
  return e.code() == ErrorCode::kProviderUnavailable ||
         e.code() == ErrorCode::kProviderProtocolError;
}

std::string fallback_warning(const Error& e) {
  return std::string("provider failed (") + std::string(error_code_name(e.code())) +
         "); used built-in generator";
}

// Runs `gen` with the provider, retrying without it when the provider fails.
template <typename F>
auto with_fallback(GenerativeProvider* provider,
                   std::vector<std::string>& warnings, F&& gen) {
  if (provider == nullptr) return gen(nullptr);
  try {
    return gen(provider);
  } catch (const Error& e) {
    if (!is_provider_error(e)) throw;
    warnings.push_back(fallback_warning(e));
    return gen(nullptr);
  }
}

}  // namespace

Workflow::Workflow(Store& store, ApiConfig cfg, GenerativeProvider* provider,
                   const Lexicon& lex)
    : store_(store), cfg_(std::move(cfg)), provider_(provider), lex_(lex) {
  cfg_.validate();
}

// -- Ingest ------------------------------------------------------------------

IngestResult Workflow::ingest(std::string_view raw, TranscriptFormat format,
                              const std::string& video_id,
                              const std::string& title,
                              const std::string& author) {
  TimedTranscript t = parse_transcript(raw, format, video_id, title);
  require_valid_id(t.video_id, "video id");
  SegmentationConfig seg_cfg;
  seg_cfg.max_segment_duration_s = cfg_.max_segment_duration_s;
  std::vector<TranscriptSegment> segments = segment_transcript(t, seg_cfg);

  IngestResult result;
  result.video_id = t.video_id;
  result.title = t.title;
  for (const TranscriptSegment& s : segments) {
    result.segment_ids.push_back(s.segment_id);
  }

  const json transcript = transcript_to_json(t);
  if (auto existing = store_.read(Collection::kVideos, t.video_id)) {
    if (existing->value("transcript", json()) == transcript &&
        existing->value("max_segment_duration_s", 0.0) ==
            cfg_.max_segment_duration_s) {
      result.already_present = true;
      return result;
    }
    throw Error(ErrorCode::kAlreadyExists,
                "video " + t.video_id + " is already stored with a different "
                "transcript");
  }

  for (const TranscriptSegment& s : segments) {
    json meta = {{"video_id", s.video_id},
                 {"index", s.index},
                 {"start_s", s.start_s},
                 {"end_s", s.end_s},
                 {"word_begin", s.word_begin},
                 {"word_end", s.word_end}};
    try {
      store_.create_versioned(Collection::kSegments, s.segment_id, meta, s.text,
                              author);
    } catch (const Error& e) {
      // Left over from an interrupted ingest of the same transcript.
      if (e.code() != ErrorCode::kAlreadyExists ||
          store_.get_version(Collection::kSegments, s.segment_id, 1).text !=
              s.text) {
        throw;
      }
    }
  }
  json video = {{"video_id", t.video_id},
                {"title", t.title},
                {"duration_s", t.duration_s},
                {"max_segment_duration_s", cfg_.max_segment_duration_s},
                {"segment_ids", result.segment_ids},
                {"created_at", format_utc(store_.now())},
                {"transcript", transcript}};
  try {
    store_.create(Collection::kVideos, t.video_id, video);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kAlreadyExists) throw;
    result.already_present = true;  // lost a race with an identical ingest
  }
  return result;
}

std::vector<VideoListing> Workflow::list_videos() const {
  return store_.list_videos();
}

json Workflow::list_segments(const std::string& video_id) const {
  require_valid_id(video_id, "video id");
  json video = store_.read_required(Collection::kVideos, video_id);
  json out = json::array();
  for (const json& sid : video.value("segment_ids", json::array())) {
    const std::string id = sid.get<std::string>();
    auto doc = store_.read(Collection::kSegments, id);
    if (!doc) continue;
    VersionedText v = versioned_from_json(doc->at("text"));
    out.push_back({{"segment_id", id},
                   {"video_id", video_id},
                   {"index", doc->value("index", 0)},
                   {"start_s", doc->value("start_s", 0.0)},
                   {"end_s", doc->value("end_s", 0.0)},
                   {"latest_version", v.head_version()},
                   {"has_summary", store_.exists(Collection::kSummaries, id)}});
  }
  return out;
}

std::string Workflow::segment_text(const std::string& segment_id) const {
  require_valid_id(segment_id, "segment id");
  return store_.get_version(Collection::kSegments, segment_id, kLatest).text;
}

json Workflow::segment_document(const std::string& segment_id,
                                int version) const {
  require_valid_id(segment_id, "segment id");
  json doc = store_.read_required(Collection::kSegments, segment_id);
  TextVersion tv = store_.get_version(Collection::kSegments, segment_id, version);
  VersionedText all = versioned_from_json(doc.at("text"));
  return {{"segment_id", segment_id},
          {"video_id", doc.value("video_id", "")},
          {"index", doc.value("index", 0)},
          {"start_s", doc.value("start_s", 0.0)},
          {"end_s", doc.value("end_s", 0.0)},
          {"version_no", tv.version_no},
          {"latest_version", all.head_version()},
          {"text", tv.text},
          {"edited_at", tv.edited_at},
          {"author", tv.author}};
}

VersionedText Workflow::edit_segment(const std::string& segment_id,
                                     const std::string& text,
                                     int expected_version,
                                     const std::string& author) {
  require_valid_id(segment_id, "segment id");
  if (expected_version < 1) {
    throw Error(ErrorCode::kInvalidArgument, "expected_version must be >= 1");
  }
  VersionedText v = store_.put_version(Collection::kSegments, segment_id, text,
                                       author, expected_version);
  mark_stale(segment_id, {QuestionType::kSaq, QuestionType::kMcq},
             v.head_version());
  return v;
}

VersionedText Workflow::segment_history(const std::string& segment_id) const {
  require_valid_id(segment_id, "segment id");
  return store_.history(Collection::kSegments, segment_id);
}

// -- Summaries ---------------------------------------------------------------

VersionedText Workflow::summarize(const std::string& segment_id,
                                  std::optional<SummaryBackend> backend,
                                  const std::string& author) {
  const std::string text = segment_text(segment_id);
  const int segment_version =
      store_.history(Collection::kSegments, segment_id).head_version();
  const SummaryBackend b =
      backend.value_or(parse_summary_backend(cfg_.summary_backend));
  std::string summary;
  if (b == SummaryBackend::kProvider) {
    if (provider_ == nullptr) {
      throw Error(ErrorCode::kProviderUnavailable,
                  "no provider is configured; use backend extractive_builtin");
    }
    summary = summarize_via_provider(text, *provider_);
  } else {
    summary = summarize_extractive(text, cfg_.summary_ratio,
                                   cfg_.summary_max_words, lex_);
  }

  int head = 0;
  if (store_.exists(Collection::kSummaries, segment_id)) {
    VersionedText current = store_.history(Collection::kSummaries, segment_id);
    head = current.head_version();
    if (current.head().text == summary) return current;
  }
  VersionedText v = store_.put_version(Collection::kSummaries, segment_id,
                                       summary, author, head);
  store_.update(Collection::kSummaries, segment_id, [&](json& doc) {
    doc["segment_id"] = segment_id;
    json& prov = doc["provenance"];
    if (!prov.is_array()) prov = json::array();
    prov.push_back({{"summary_version", v.head_version()},
                    {"backend", summary_backend_name(b)},
                    {"segment_version", segment_version}});
  });
  mark_stale(segment_id, {QuestionType::kBlq, QuestionType::kGfq},
             v.head_version());
  return v;
}

VersionedText Workflow::edit_summary(const std::string& segment_id,
                                     const std::string& text,
                                     int expected_version,
                                     const std::string& author) {
  require_valid_id(segment_id, "segment id");
  if (!store_.exists(Collection::kSegments, segment_id)) {
    throw Error(ErrorCode::kNotFound, "segments/" + segment_id);
  }
  if (trim(text).empty()) {
    throw Error(ErrorCode::kEmptySummary, "summary text is empty");
  }
  VersionedText v = store_.put_version(Collection::kSummaries, segment_id,
                                       text, author, expected_version);
  if (expected_version == 0) {
    store_.update(Collection::kSummaries, segment_id,
                  [&](json& doc) { doc["segment_id"] = segment_id; });
  }
  mark_stale(segment_id, {QuestionType::kBlq, QuestionType::kGfq},
             v.head_version());
  return v;
}

json Workflow::summary_document(const std::string& segment_id,
                                int version) const {
  require_valid_id(segment_id, "segment id");
  json doc = store_.read_required(Collection::kSummaries, segment_id);
  TextVersion tv = store_.get_version(Collection::kSummaries, segment_id, version);
  VersionedText all = versioned_from_json(doc.at("text"));
  json out = {{"segment_id", segment_id},
              {"version_no", tv.version_no},
              {"latest_version", all.head_version()},
              {"text", tv.text},
              {"edited_at", tv.edited_at},
              {"author", tv.author},
              {"versions", versioned_to_json(all)["versions"]}};
  for (const json& p : doc.value("provenance", json::array())) {
    if (p.value("summary_version", 0) == tv.version_no) out["provenance"] = p;
  }
  return out;
}

// -- Keywords ----------------------------------------------------------------

KeywordListing Workflow::keywords(const std::string& segment_id,
                                  std::optional<int> limit) const {
  const std::string text = segment_text(segment_id);
  const int lim = limit.value_or(cfg_.keyword_limit);
  if (lim < 1) throw Error(ErrorCode::kInvalidArgument, "limit must be >= 1");
  KeywordListing out;
  out.recommended = extract_candidates(text, static_cast<size_t>(lim), lex_);
  if (auto doc = store_.read(Collection::kKeywords, segment_id)) {
    for (const json& c : doc->value("custom", json::array())) {
      KeywordCandidate k;
      k.phrase = c.at("phrase").get<std::string>();
      k.kind = parse_candidate_kind(c.at("kind").get<std::string>());
      k.origin = KeywordOrigin::kCustom;
      std::vector<size_t> hits = find_occurrences(text, k.phrase);
      k.frequency = static_cast<int>(hits.size());
      k.first_offset = hits.empty() ? text.size() : hits.front();
      out.custom.push_back(std::move(k));
    }
  }
  return out;
}

KeywordCandidate Workflow::add_custom_keyword(const std::string& segment_id,
                                              const std::string& phrase,
                                              const std::string& author) {
  const std::string text = segment_text(segment_id);
  KeywordCandidate k = validate_custom_keyword(text, phrase, lex_);
  k.origin = KeywordOrigin::kCustom;
  if (!store_.exists(Collection::kKeywords, segment_id)) {
    try {
      store_.create(Collection::kKeywords, segment_id,
                    {{"segment_id", segment_id}, {"custom", json::array()}});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kAlreadyExists) throw;
    }
  }
  const std::string key = to_lower(k.phrase);
  const std::string stamp = format_utc(store_.now());
  store_.update(Collection::kKeywords, segment_id, [&](json& doc) {
    json& list = doc["custom"];
    for (const json& c : list) {
      if (to_lower(c.at("phrase").get<std::string>()) == key) return;
    }
    list.push_back({{"phrase", k.phrase},
                    {"kind", candidate_kind_name(k.kind)},
                    {"added_at", stamp},
                    {"author", author}});
  });
  return k;
}

KeywordRef Workflow::resolve_keyword(const std::string& segment_id,
                                     const std::string& segment_text,
                                     const std::string& phrase,
                                     const std::string& author) {
  const std::string p = trim(phrase);
  if (p.empty()) throw Error(ErrorCode::kInvalidArgument, "keyword is empty");
  const std::string key = to_lower(p);
  for (const KeywordCandidate& c : extract_candidates(
           segment_text, static_cast<size_t>(cfg_.keyword_limit), lex_)) {
    if (to_lower(c.phrase) == key) return {p, KeywordOrigin::kRecommended};
  }
  add_custom_keyword(segment_id, p, author);
  return {p, KeywordOrigin::kCustom};
}

// -- Questions ---------------------------------------------------------------

std::string Workflow::new_set_id(const std::string& segment_id,
                                 QuestionType t) {
  const uint64_t n = counter_.fetch_add(1);
  const std::string seed = segment_id + '\x1f' +
                           std::string(question_type_name(t)) + '\x1f' +
                           format_utc(store_.now()) + '\x1f' +
                           std::to_string(n) + '\x1f' +
                           std::to_string(store_.list_ids(Collection::kQuestions).size());
  return "qs-" + hex64(fnv1a64(seed));
}

void Workflow::mark_stale(const std::string& segment_id,
                          std::initializer_list<QuestionType> types,
                          int fresh_version) {
  for (const QuestionSet& s : question_sets(segment_id)) {
    if (s.stale) continue;
    if (std::find(types.begin(), types.end(), s.qtype) == types.end()) continue;
    const bool from_summary =
        s.qtype == QuestionType::kBlq || s.qtype == QuestionType::kGfq;
    const int built_on = from_summary ? s.summary_version : s.segment_version;
    if (built_on >= fresh_version) continue;
    store_.update(Collection::kQuestions, s.set_id,
                  [](json& doc) { doc["stale"] = true; });
  }
}

std::vector<QuestionSet> Workflow::question_sets(
    const std::string& segment_id) const {
  require_valid_id(segment_id, "segment id");
  std::vector<QuestionSet> out;
  for (QuestionSet& s : list_question_sets(store_)) {
    if (s.segment_id == segment_id) out.push_back(std::move(s));
  }
  return out;
}

QuestionSet Workflow::generate(const std::string& segment_id,
                               const GenerateParams& params,
                               const std::string& author) {
  require_valid_id(segment_id, "segment id");
  json seg_doc = store_.read_required(Collection::kSegments, segment_id);
  const VersionedText seg = versioned_from_json(seg_doc.at("text"));
  const std::string text = seg.head().text;
  const std::string video_id = seg_doc.value("video_id", "");
  std::vector<std::string> warnings;

  auto finish = [&](QuestionSet set) {
    set.segment_version = seg.head_version();
    set.warnings.insert(set.warnings.end(), warnings.begin(), warnings.end());
    for (int attempt = 0;; ++attempt) {
      try {
        save_question_set(store_, set);
        return set;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kAlreadyExists || attempt > 8) throw;
        set.set_id = new_set_id(segment_id, set.qtype);
      }
    }
  };
  auto summary_head = [&]() {
    if (!store_.exists(Collection::kSummaries, segment_id)) {
      throw Error(ErrorCode::kNotFound,
                  "segment " + segment_id + " has no summary yet; create one "
                  "before generating " +
                      std::string(question_type_name(params.qtype)) +
                      " questions");
    }
    return store_.history(Collection::kSummaries, segment_id);
  };

  switch (params.qtype) {
    case QuestionType::kSaq: {
      if (!params.keyword) {
        throw Error(ErrorCode::kInvalidArgument, "SAQ generation needs a keyword");
      }
      KeywordRef kw = resolve_keyword(segment_id, text, *params.keyword, author);
      const int n = params.n.value_or(cfg_.top_n);
      auto ranked = with_fallback(provider_, warnings, [&](GenerativeProvider* p) {
        return generate_saq(text, kw.phrase, n, p, lex_);
      });
      QuestionSet set =
          make_question_set(new_set_id(segment_id, QuestionType::kSaq),
                            segment_id, video_id, QuestionType::kSaq, ranked,
                            author, store_.now());
      set.keyword = kw;
      return finish(std::move(set));
    }

    case QuestionType::kMcq: {
      QuestionSet saq;
      if (params.saq_set_id) {
        saq = load_question_set(store_, *params.saq_set_id);
        if (saq.qtype != QuestionType::kSaq || saq.segment_id != segment_id) {
          throw Error(ErrorCode::kInvalidArgument,
                      "saq_set_id must name an SAQ set of this segment");
        }
      } else {
        GenerateParams sp;
        sp.qtype = QuestionType::kSaq;
        sp.keyword = params.keyword;
        saq = generate(segment_id, sp, author);
      }
      const int n = params.n.value_or(cfg_.distractor_count);
      const uint64_t seed = params.seed.value_or(fnv1a64(saq.set_id));
      std::vector<GeneratedQuestion> ranked;
      for (const QuestionEntry& q : saq.questions) {
        const auto& sp = std::get<SaqPayload>(q.head());
        McqPayload mcq = generate_mcq(sp, text, n, seed + static_cast<uint64_t>(q.rank),
                                      provider_, lex_);
        ranked.push_back({mcq, q.confidence, 0, q.source, false});
      }
      QuestionSet set =
          make_question_set(new_set_id(segment_id, QuestionType::kMcq),
                            segment_id, video_id, QuestionType::kMcq, ranked,
                            author, store_.now());
      set.keyword = saq.keyword;
      set.seed = seed;
      set.saq_set_id = saq.set_id;
      return finish(std::move(set));
    }

    case QuestionType::kBlq: {
      const VersionedText summary = summary_head();
      const int n = params.n.value_or(cfg_.blq_per_polarity);
      BlqResult r = with_fallback(provider_, warnings, [&](GenerativeProvider* p) {
        return generate_blq(summary.head().text, n, p, lex_);
      });
      std::vector<GeneratedQuestion> all = r.yes_set;
      all.insert(all.end(), r.no_set.begin(), r.no_set.end());
      QuestionSet set =
          make_question_set(new_set_id(segment_id, QuestionType::kBlq),
                            segment_id, video_id, QuestionType::kBlq, all,
                            author, store_.now());
      for (size_t i = 0; i < set.questions.size(); ++i) {
        set.questions[i].group = i < r.yes_set.size() ? "yes" : "no";
      }
      set.summary_version = summary.head_version();
      warnings.insert(warnings.end(), r.warnings.begin(), r.warnings.end());
      return finish(std::move(set));
    }

    case QuestionType::kGfq: {
      const VersionedText summary = summary_head();
      const std::string& stext = summary.head().text;
      std::vector<KeywordCandidate> recommended = extract_candidates(
          text, static_cast<size_t>(cfg_.keyword_limit), lex_);
      auto is_recommended = [&](const std::string& p) {
        const std::string key = to_lower(trim(p));
        return std::any_of(recommended.begin(), recommended.end(),
                           [&](const KeywordCandidate& c) {
                             return to_lower(c.phrase) == key;
                           });
      };
      std::vector<std::string> chosen = params.keywords;
      if (chosen.empty()) {
        const int want = params.n.value_or(cfg_.top_n);
        for (const KeywordCandidate& c : recommended) {
          if (static_cast<int>(chosen.size()) >= want) break;
          if (find_occurrences(stext, c.phrase).empty()) continue;
          bool clash = std::any_of(chosen.begin(), chosen.end(),
                                   [&](const std::string& p) {
                                     return phrases_overlap(p, c.phrase);
                                   });
          if (clash) continue;
          chosen.push_back(c.phrase);
          try {
            generate_gfq(stext, chosen);
          } catch (const Error&) {
            chosen.pop_back();
          }
        }
        if (chosen.empty()) {
          throw Error(ErrorCode::kKeywordNotInSummary,
                      "no recommended keyword occurs in the summary; pass "
                      "keywords explicitly");
        }
      }
      GfqPayload gfq = generate_gfq(stext, chosen);
      QuestionSet set = make_question_set(
          new_set_id(segment_id, QuestionType::kGfq), segment_id, video_id,
          QuestionType::kGfq,
          {{gfq, 1.0, 0, QuestionSource::kFallbackBuiltin, false}}, author,
          store_.now());
      for (const std::string& p : chosen) {
        set.keywords.push_back({trim(p), is_recommended(p)
                                             ? KeywordOrigin::kRecommended
                                             : KeywordOrigin::kCustom});
      }
      set.summary_version = summary.head_version();
      return finish(std::move(set));
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown question type");
}

// -- Analytics ---------------------------------------------------------------

RatingSummary Workflow::rating_summary() const {
  return summarize_ratings(effective_ratings(list_ratings(store_)));
}

KeywordLengthHistogram Workflow::keyword_histogram() const {
  return keyword_length_histogram(list_question_sets(store_),
                                  list_ratings(store_));
}

}  // namespace lqg
