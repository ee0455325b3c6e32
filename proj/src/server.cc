#include "lectureqg/server.h"

#include <httplib.h>

#include <functional>

#include "lectureqg/error.h"
#include "lectureqg/util.h"

namespace lqg {

using json = nlohmann::json;

json candidate_to_json(const KeywordCandidate& c) {
  return {{"phrase", c.phrase},
          {"kind", candidate_kind_name(c.kind)},
          {"frequency", c.frequency},
          {"first_offset", c.first_offset},
          {"origin", keyword_origin_name(c.origin)}};
}

json ingest_result_to_json(const IngestResult& r) {
  return {{"video_id", r.video_id},
          {"title", r.title},
          {"segment_ids", r.segment_ids},
          {"segment_count", r.segment_ids.size()},
          {"already_present", r.already_present}};
}

json video_listing_to_json(const std::vector<VideoListing>& v) {
  json out = json::array();
  for (const VideoListing& x : v) {
    out.push_back({{"video_id", x.video_id},
                   {"title", x.title},
                   {"segment_count", x.segment_count}});
  }
  return out;
}

json error_body(const Error& e) {
  json body = {{"error",
                {{"code", error_code_name(e.code())}, {"message", e.what()}}}};
  if (e.code() == ErrorCode::kProviderUnavailable ||
      e.code() == ErrorCode::kProviderProtocolError) {
    body["hint"] =
        "the generative provider failed; retry with backend "
        "extractive_builtin or without a provider to use built-in generators";
  }
  return body;
}

namespace {

using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

void send(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

json body_object(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  json j = json::parse(req.body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "request body must be a JSON object");
  }
  return j;
}

template <typename T>
T field(const json& body, const char* key) {
  if (!body.contains(key) || body[key].is_null()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("missing field '") + key + "'");
  }
  try {
    return body[key].get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("field '") + key + "' has the wrong type");
  }
}

template <typename T>
std::optional<T> opt_field(const json& body, const char* key) {
  if (!body.contains(key) || body[key].is_null()) return std::nullopt;
  return field<T>(body, key);
}

std::string author_of(const json& body, const char* key = "author") {
  auto a = opt_field<std::string>(body, key);
  return a && !trim(*a).empty() ? trim(*a) : "anonymous";
}

std::optional<int> int_param(const httplib::Request& req, const char* name) {
  if (!req.has_param(name)) return std::nullopt;
  const std::string v = req.get_param_value(name);
  try {
    size_t used = 0;
    int n = std::stoi(v, &used);
    if (used == v.size()) return n;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kInvalidArgument,
              std::string("query parameter '") + name + "' must be an integer");
}

Handler guarded(Handler h) {
  return [h = std::move(h)](const httplib::Request& req, httplib::Response& res) {
    try {
      h(req, res);
    } catch (const Error& e) {
      send(res, error_body(e), http_status_for(e.code()));
    } catch (const json::exception& e) {
      send(res, error_body(Error(ErrorCode::kInvalidArgument, e.what())), 400);
    } catch (const std::exception&) {
      send(res,
           error_body(Error(ErrorCode::kIoError, "internal error")), 500);
    }
  };
}

json versions_json(const VersionedText& v) {
  json j = versioned_to_json(v);
  j["latest_version"] = v.head_version();
  return j;
}

json edit_to_json(const EditResult& r) {
  return {{"question_set", question_set_to_json(r.set)},
          {"warnings", r.warnings}};
}

std::vector<int> ranks_of(const json& body) {
  return field<std::vector<int>>(body, "ranks");
}

}  // namespace

struct ApiServer::Impl {
  explicit Impl(Workflow& w) : wf(w) { routes(); }

  void routes() {
    auto& s = server;
    s.Get("/health", guarded([this](const auto&, auto& res) {
            send(res, {{"status", "ok"}, {"provider", wf.has_provider()}});
          }));

    s.Get("/videos", guarded([this](const auto&, auto& res) {
            send(res, video_listing_to_json(wf.list_videos()));
          }));

    s.Post("/videos", guarded([this](const auto& req, auto& res) {
             json body = body_object(req);
             TranscriptFormat fmt = parse_transcript_format(
                 opt_field<std::string>(body, "format").value_or("timed_json"));
             if (!body.contains("content")) {
               throw Error(ErrorCode::kInvalidArgument, "missing field 'content'");
             }
             const json& content = body["content"];
             std::string raw = content.is_string() ? content.get<std::string>()
                                                   : content.dump();
             IngestResult r = wf.ingest(
                 raw, fmt, opt_field<std::string>(body, "video_id").value_or(""),
                 opt_field<std::string>(body, "title").value_or(""),
                 author_of(body));
             send(res, ingest_result_to_json(r), r.already_present ? 200 : 201);
           }));

    s.Get(R"(/videos/([^/]+)/segments)",
          guarded([this](const auto& req, auto& res) {
            send(res, wf.list_segments(req.matches[1]));
          }));

    s.Get(R"(/segments/([^/]+)/text)",
          guarded([this](const auto& req, auto& res) {
            send(res, wf.segment_document(req.matches[1],
                                          int_param(req, "version").value_or(kLatest)));
          }));

    s.Put(R"(/segments/([^/]+)/text)",
          guarded([this](const auto& req, auto& res) {
            json body = body_object(req);
            VersionedText v = wf.edit_segment(
                req.matches[1], field<std::string>(body, "text"),
                field<int>(body, "expected_version"), author_of(body));
            send(res, versions_json(v));
          }));

    s.Get(R"(/segments/([^/]+)/versions)",
          guarded([this](const auto& req, auto& res) {
            send(res, versions_json(wf.segment_history(req.matches[1])));
          }));

    s.Post(R"(/segments/([^/]+)/summary)",
           guarded([this](const auto& req, auto& res) {
             json body = body_object(req);
             std::optional<SummaryBackend> backend;
             if (auto b = opt_field<std::string>(body, "backend")) {
               backend = parse_summary_backend(*b);
             }
             wf.summarize(req.matches[1], backend, author_of(body));
             send(res, wf.summary_document(req.matches[1]), 201);
           }));

    s.Get(R"(/segments/([^/]+)/summary)",
          guarded([this](const auto& req, auto& res) {
            send(res, wf.summary_document(req.matches[1],
                                          int_param(req, "version").value_or(kLatest)));
          }));

    s.Put(R"(/summaries/([^/]+))", guarded([this](const auto& req, auto& res) {
            json body = body_object(req);
            wf.edit_summary(req.matches[1], field<std::string>(body, "text"),
                            field<int>(body, "expected_version"),
                            author_of(body));
            send(res, wf.summary_document(req.matches[1]));
          }));

    s.Get(R"(/segments/([^/]+)/keywords)",
          guarded([this](const auto& req, auto& res) {
            KeywordListing k = wf.keywords(req.matches[1], int_param(req, "limit"));
            json rec = json::array();
            json cus = json::array();
            for (const auto& c : k.recommended) rec.push_back(candidate_to_json(c));
            for (const auto& c : k.custom) cus.push_back(candidate_to_json(c));
            send(res, {{"recommended", rec}, {"custom", cus}});
          }));

    s.Post(R"(/segments/([^/]+)/keywords/custom)",
           guarded([this](const auto& req, auto& res) {
             json body = body_object(req);
             KeywordCandidate c = wf.add_custom_keyword(
                 req.matches[1], field<std::string>(body, "phrase"),
                 author_of(body));
             send(res, candidate_to_json(c), 201);
           }));

    s.Post(R"(/segments/([^/]+)/questions)",
           guarded([this](const auto& req, auto& res) {
             json body = body_object(req);
             GenerateParams p;
             p.qtype = parse_question_type(field<std::string>(body, "qtype"));
             p.keyword = opt_field<std::string>(body, "keyword");
             p.keywords = opt_field<std::vector<std::string>>(body, "keywords")
                              .value_or(std::vector<std::string>{});
             p.n = opt_field<int>(body, "n");
             p.seed = opt_field<uint64_t>(body, "seed");
             p.saq_set_id = opt_field<std::string>(body, "saq_set_id");
             QuestionSet set = wf.generate(req.matches[1], p, author_of(body));
             send(res, question_set_to_json(set), 201);
           }));

    s.Get(R"(/segments/([^/]+)/questions)",
          guarded([this](const auto& req, auto& res) {
            json out = json::array();
            for (const QuestionSet& q : wf.question_sets(req.matches[1])) {
              out.push_back(question_set_to_json(q));
            }
            send(res, out);
          }));

    s.Get(R"(/questions/([^/]+))", guarded([this](const auto& req, auto& res) {
            require_valid_id(req.matches[1].str(), "question set id");
            send(res, question_set_to_json(
                          load_question_set(wf.store(), req.matches[1])));
          }));

    s.Put(R"(/questions/([^/]+)/(\d+))",
          guarded([this](const auto& req, auto& res) {
            json body = body_object(req);
            QuestionEdit e;
            e.text = opt_field<std::string>(body, "text");
            e.answer = opt_field<std::string>(body, "answer");
            e.answers = opt_field<std::vector<std::string>>(body, "answers");
            e.distractors =
                opt_field<std::vector<std::string>>(body, "distractors");
            EditResult r = edit_question(wf.store(), req.matches[1],
                                         std::stoi(req.matches[2]), e,
                                         author_of(body),
                                         opt_field<int64_t>(body, "expected_revision"));
            send(res, edit_to_json(r));
          }));

    s.Post(R"(/questions/([^/]+)/rating)",
           guarded([this](const auto& req, auto& res) {
             json body = body_object(req);
             Rating r = rate_question_set(
                 wf.store(), req.matches[1],
                 parse_verdict(field<std::string>(body, "verdict")),
                 opt_field<int>(body, "best_question_rank"),
                 author_of(body, "rater"),
                 opt_field<std::string>(body, "supersedes"));
             send(res, rating_to_json(r), 201);
           }));

    s.Get(R"(/questions/([^/]+)/ratings)",
          guarded([this](const auto& req, auto& res) {
            const std::string id = req.matches[1];
            load_question_set(wf.store(), id);
            json all = json::array();
            for (const Rating& r : list_ratings(wf.store())) {
              if (r.question_set_id == id) all.push_back(rating_to_json(r));
            }
            auto eff = effective_rating(wf.store(), id);
            send(res, {{"ratings", all},
                       {"effective", eff ? rating_to_json(*eff) : json(nullptr)}});
          }));

    s.Post(R"(/questions/([^/]+)/accept)",
           guarded([this](const auto& req, auto& res) {
             json body = body_object(req);
             send(res, question_set_to_json(accept_questions(
                           wf.store(), req.matches[1], ranks_of(body),
                           author_of(body))));
           }));

    s.Post(R"(/questions/([^/]+)/discard)",
           guarded([this](const auto& req, auto& res) {
             json body = body_object(req);
             send(res, question_set_to_json(discard_questions(
                           wf.store(), req.matches[1], ranks_of(body),
                           author_of(body))));
           }));

    s.Get(R"(/export/([^/]+))", guarded([this](const auto& req, auto& res) {
            send(res, export_segment(wf.store(), req.matches[1]));
          }));

    s.Get("/analytics/ratings", guarded([this](const auto&, auto& res) {
            send(res, rating_summary_to_json(wf.rating_summary()));
          }));

    s.Get("/analytics/keyword-lengths", guarded([this](const auto&, auto& res) {
            send(res, histogram_to_json(wf.keyword_histogram()));
          }));

    s.set_error_handler([](const httplib::Request&, httplib::Response& res) {
      if (res.body.empty()) {
        json body = {{"error",
                      {{"code", res.status == 404 ? "NotFound" : "HttpError"},
                       {"message", "no such endpoint"}}}};
        res.set_content(body.dump(), "application/json");
      }
    });
  }

  Workflow& wf;
  httplib::Server server;
};

ApiServer::ApiServer(Workflow& workflow)
    : impl_(std::make_unique<Impl>(workflow)) {}

ApiServer::~ApiServer() { stop(); }

bool ApiServer::listen(const std::string& host, int port) {
  return impl_->server.listen(host, port);
}

int ApiServer::bind_any_port(const std::string& host) {
  return impl_->server.bind_to_any_port(host);
}

bool ApiServer::listen_after_bind() { return impl_->server.listen_after_bind(); }

void ApiServer::wait_until_ready() { impl_->server.wait_until_ready(); }

void ApiServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

}  // namespace lqg
