// End-to-end walk over the REST API and a structural check of the store it
// leaves behind. Shared by the API tests and the acceptance binary, so it
// reports problems as strings instead of through a test framework.

#ifndef LECTUREQG_TESTS_API_WALK_H_
#define LECTUREQG_TESTS_API_WALK_H_

#include <httplib.h>

#include <filesystem>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "lectureqg/ingest.h"
#include "lectureqg/provider.h"
#include "lectureqg/server.h"
#include "lectureqg/store.h"
#include "lectureqg/workflow.h"

namespace lqg::testing {

// A running ApiServer over its own store, optionally wired to a provider.
class ApiHarness {
 public:
  ApiHarness(const std::filesystem::path& root, const std::string& provider_url)
      : store_(root) {
    cfg_.store_root = root.string();
    cfg_.provider_base_url = provider_url;
    if (!provider_url.empty()) {
      provider_ = std::make_unique<HttpProvider>(HttpProviderConfig{provider_url, 5.0, 2});
    }
    wf_ = std::make_unique<Workflow>(store_, cfg_, provider_.get());
    server_ = std::make_unique<ApiServer>(*wf_);
    port_ = server_->bind_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    client_->set_read_timeout(30, 0);
  }
  ~ApiHarness() {
    server_->stop();
    if (thread_.joinable()) thread_.join();
  }

  httplib::Client& client() { return *client_; }
  Store& store() { return store_; }

 private:
  ApiConfig cfg_;
  Store store_;
  std::unique_ptr<GenerativeProvider> provider_;
  std::unique_ptr<Workflow> wf_;
  std::unique_ptr<ApiServer> server_;
  int port_ = -1;
  std::thread thread_;
  std::unique_ptr<httplib::Client> client_;
};

// Seven minutes of lecture speech, one word every half second.
inline nlohmann::json lecture_transcript_json(const std::string& video_id) {
  const TimedTranscript plain = parse_transcript(
      "Linux was created 25 years ago by Linus Torvalds. The kernel manages "
      "memory and processes. Open source software is developed in public. "
      "Many companies contribute to open source software. Dr. Smith teaches "
      "the course on Mondays. The course has 12 lectures. Free software "
      "respects the freedom of users. The license protects the source code.",
      TranscriptFormat::kPlainText);
  TimedTranscript t;
  t.video_id = video_id;
  t.title = "Operating systems, lecture 1";
  t.duration_s = 420.0;
  double s = 0.0;
  for (size_t i = 0; s + 0.4 <= t.duration_s; ++i) {
    const TimedWord& w = plain.words[i % plain.words.size()];
    if (w.kind == WordKind::kPunctuation) {
      t.words.push_back({s, s, w.text, WordKind::kPunctuation});
    } else {
      t.words.push_back({s, s + 0.4, w.text, WordKind::kPronunciation});
      s += 0.5;
    }
  }
  return transcript_to_json(t);
}

struct WalkReport {
  std::vector<std::string> failures;
  int steps = 0;
  nlohmann::json exported;
  std::set<std::string> sources;  // question sources seen in generated sets
};

class ApiWalk {
 public:
  explicit ApiWalk(httplib::Client& c) : c_(c) {}

  WalkReport run() {
    using nlohmann::json;
    expect_status(c_.Get("/health"), 200, "health");

    json ingest = {{"format", "timed_json"},
                   {"content", lecture_transcript_json("os-101")},
                   {"author", "teacher"}};
    json video = call(c_.Post("/videos", ingest.dump(), "application/json"), 201, "ingest");
    expect_status(c_.Post("/videos", ingest.dump(), "application/json"), 200, "re-ingest");
    json segs = call(c_.Get("/videos/os-101/segments"), 200, "list segments");
    check(segs.is_array() && segs.size() == 2, "7-minute video has two segments");
    if (!segs.is_array() || segs.empty()) return std::move(report_);
    const std::string seg = segs[0].value("segment_id", "");

    // Transcript edit with optimistic concurrency.
    json cur = call(c_.Get("/segments/" + seg + "/text"), 200, "segment text");
    const std::string original = cur.value("text", "");
    const std::string edited = original + " Linus Torvalds still maintains the kernel.";
    json put = {{"text", edited}, {"expected_version", 1}, {"author", "teacher"}};
    json hist = call(c_.Put("/segments/" + seg + "/text", put.dump(), "application/json"),
                     200, "edit segment");
    check(hist.value("latest_version", 0) == 2, "edit creates version 2");
    json stale = {{"text", "other"}, {"expected_version", 1}};
    expect_status(c_.Put("/segments/" + seg + "/text", stale.dump(), "application/json"),
                  409, "stale edit conflicts");
    json v1 = call(c_.Get("/segments/" + seg + "/text?version=1"), 200, "version 1");
    check(v1.value("text", "") == original, "version 1 is the original text");

    // Summary and keywords.
    json sum = call(c_.Post("/segments/" + seg + "/summary",
                            R"({"backend":"extractive_builtin","author":"teacher"})",
                            "application/json"),
                    201, "summarize");
    check(!sum.value("text", "").empty(), "summary text present");
    json sum_edit = {{"text",
                      "Linus Torvalds created Linux 25 years ago. The kernel manages memory "
                      "and processes. Open source software is developed in public."},
                     {"expected_version", sum.value("latest_version", 1)},
                     {"author", "teacher"}};
    json sum2 = call(c_.Put("/summaries/" + seg, sum_edit.dump(), "application/json"), 200,
                     "edit summary");
    check(sum2.value("version_no", 0) == sum.value("latest_version", 1) + 1,
          "summary edit adds a version");
    json kws = call(c_.Get("/segments/" + seg + "/keywords?limit=10"), 200, "keywords");
    check(kws.contains("recommended") && !kws["recommended"].empty(), "keywords recommended");
    call(c_.Post("/segments/" + seg + "/keywords/custom", R"({"phrase":"the freedom"})",
                 "application/json"),
         201, "custom keyword");
    expect_status(c_.Post("/segments/" + seg + "/keywords/custom", R"({"phrase":"quantum"})",
                          "application/json"),
                  400, "custom keyword must occur");

    // Generation of all four types.
    json saq = generate(seg, {{"qtype", "SAQ"}, {"keyword", "Linus Torvalds"}});
    const auto& sq = saq["questions"];
    check(sq.is_array() && !sq.empty() && sq.size() <= 3, "SAQ top-3");
    for (size_t i = 1; sq.is_array() && i < sq.size(); ++i) {
      check(sq[i - 1]["confidence"].get<double>() >= sq[i]["confidence"].get<double>(),
            "SAQ confidence non-increasing");
    }
    json mcq = generate(seg, {{"qtype", "MCQ"}, {"saq_set_id", saq.value("set_id", "")},
                              {"seed", 7}});
    json blq = generate(seg, {{"qtype", "BLQ"}});
    check(blq["questions"].size() == 6, "BLQ has three yes and three no questions");
    json gfq = generate(seg, {{"qtype", "GFQ"}});
    check(gfq["questions"].size() == 1, "GFQ is one gapped text");
    expect_status(c_.Post("/segments/" + seg + "/questions", R"({"qtype":"SAQ"})",
                          "application/json"),
                  400, "SAQ needs a keyword");

    // Review.
    const std::string blq_id = blq.value("set_id", "");
    json edit = call(c_.Put("/questions/" + blq_id + "/1", R"({"answer":"no"})",
                            "application/json"),
                     200, "edit BLQ answer");
    check(edit["question_set"]["questions"][0]["versions"].size() == 2,
          "edit keeps both versions");
    expect_status(c_.Put("/questions/" + blq_id + "/9", R"({"answer":"no"})",
                         "application/json"),
                  404, "edit of missing rank");

    expect_status(c_.Post("/questions/" + saq.value("set_id", "") + "/rating",
                          R"({"verdict":"Good"})", "application/json"),
                  400, "Good SAQ rating needs a best question");
    rate(saq.value("set_id", ""), R"({"verdict":"Good","best_question_rank":1,"rater":"t"})");
    rate(mcq.value("set_id", ""), R"({"verdict":"Average","rater":"t"})");
    rate(blq_id, R"({"verdict":"Bad","rater":"t"})");
    rate(gfq.value("set_id", ""), R"({"verdict":"Good","rater":"t"})");

    for (const json* set : {&saq, &mcq, &blq, &gfq}) {
      call(c_.Post("/questions/" + set->value("set_id", "") + "/accept",
                   R"({"ranks":[1],"author":"teacher"})", "application/json"),
           200, "accept");
    }
    call(c_.Post("/questions/" + blq_id + "/discard", R"({"ranks":[2]})", "application/json"),
         200, "discard");

    report_.exported = call(c_.Get("/export/" + seg), 200, "export");
    check(report_.exported.is_array() && report_.exported.size() == 4,
          "export holds the four accepted questions");
    json analytics = call(c_.Get("/analytics/ratings"), 200, "analytics");
    check(analytics.contains("SAQ") && analytics["SAQ"]["counts"]["good"] == 1, "analytics counts SAQ");
    call(c_.Get("/analytics/keyword-lengths"), 200, "keyword histogram");
    expect_status(c_.Get("/segments/nope/text"), 404, "unknown segment");
    expect_status(c_.Get("/no/such/route"), 404, "unknown route");
    return std::move(report_);
  }

 private:
  nlohmann::json generate(const std::string& seg, nlohmann::json body) {
    body["author"] = "teacher";
    nlohmann::json set = call(c_.Post("/segments/" + seg + "/questions", body.dump(),
                                      "application/json"),
                              201, "generate " + body.value("qtype", ""));
    if (set.contains("questions")) {
      for (const auto& q : set["questions"]) report_.sources.insert(q.value("source", ""));
    }
    return set;
  }

  void rate(const std::string& set_id, const std::string& body) {
    call(c_.Post("/questions/" + set_id + "/rating", body, "application/json"), 201, "rate");
  }

  void check(bool ok, const std::string& what) {
    ++report_.steps;
    if (!ok) report_.failures.push_back(what);
  }

  void expect_status(const httplib::Result& res, int status, const std::string& what) {
    if (!res) {
      check(false, what + ": no response");
      return;
    }
    check(res->status == status,
          what + ": HTTP " + std::to_string(res->status) + " " + res->body);
  }

  nlohmann::json call(const httplib::Result& res, int status, const std::string& what) {
    expect_status(res, status, what);
    if (!res) return nlohmann::json::object();
    nlohmann::json j = nlohmann::json::parse(res->body, nullptr, false);
    if (j.is_discarded()) {
      check(false, what + ": body is not JSON");
      return nlohmann::json::object();
    }
    return j;
  }

  httplib::Client& c_;
  WalkReport report_;
};

// Structural invariants of a store directory. Returns one line per problem.
inline std::vector<std::string> store_integrity_problems(const Store& store) {
  using nlohmann::json;
  std::vector<std::string> problems;
  auto bad = [&](const std::string& what) { problems.push_back(what); };

  for (const auto& entry :
       std::filesystem::recursive_directory_iterator(store.root())) {
    if (entry.is_regular_file() &&
        entry.path().filename().string().find(".tmp") != std::string::npos) {
      bad("leftover temp file " + entry.path().filename().string());
    }
  }

  auto check_versions = [&](Collection c, const std::string& id) {
    VersionedText v = store.history(c, id);
    for (size_t i = 0; i < v.versions.size(); ++i) {
      if (v.versions[i].version_no != static_cast<int>(i + 1)) bad(id + ": version gap");
      if (i > 0 && v.versions[i].edited_at < v.versions[i - 1].edited_at) {
        bad(id + ": timestamps go backwards");
      }
    }
    if (v.versions.empty()) bad(id + ": no versions");
  };

  std::set<std::string> segments;
  for (const std::string& vid : store.list_ids(Collection::kVideos)) {
    json doc = store.read_required(Collection::kVideos, vid);
    for (const json& sid : doc.value("segment_ids", json::array())) {
      if (!store.exists(Collection::kSegments, sid.get<std::string>())) {
        bad(vid + ": missing segment " + sid.get<std::string>());
      }
    }
  }
  for (const std::string& sid : store.list_ids(Collection::kSegments)) {
    segments.insert(sid);
    check_versions(Collection::kSegments, sid);
  }
  for (const std::string& sid : store.list_ids(Collection::kSummaries)) {
    if (!segments.count(sid)) bad("summary without segment " + sid);
    check_versions(Collection::kSummaries, sid);
  }
  std::set<std::string> sets;
  for (const std::string& id : store.list_ids(Collection::kQuestions)) {
    QuestionSet s = load_question_set(store, id);
    sets.insert(id);
    if (!segments.count(s.segment_id)) bad(id + ": unknown segment");
    for (size_t i = 0; i < s.questions.size(); ++i) {
      const QuestionEntry& q = s.questions[i];
      if (q.rank != static_cast<int>(i + 1)) bad(id + ": rank gap");
      for (size_t k = 0; k < q.versions.size(); ++k) {
        if (q.versions[k].version_no != static_cast<int>(k + 1)) bad(id + ": version gap");
      }
    }
  }
  for (const Rating& r : list_ratings(store)) {
    if (!sets.count(r.question_set_id)) bad(r.rating_id + ": unknown set");
  }
  return problems;
}

}  // namespace lqg::testing

#endif  // LECTUREQG_TESTS_API_WALK_H_
