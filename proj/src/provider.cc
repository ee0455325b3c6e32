#include "lectureqg/provider.h"

#include <algorithm>
#include <cmath>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "lectureqg/error.h"

namespace lqg {

using json = nlohmann::json;

std::string_view provider_task_name(ProviderTask task) {
  switch (task) {
    case ProviderTask::kSummarize: return "summarize";
    case ProviderTask::kSaq: return "saq";
    case ProviderTask::kBoolq: return "boolq";
    case ProviderTask::kDistractors: return "distractors";
  }
  return "summarize";
}

ProviderTask parse_provider_task(std::string_view name) {
  if (name == "summarize") return ProviderTask::kSummarize;
  if (name == "saq") return ProviderTask::kSaq;
  if (name == "boolq") return ProviderTask::kBoolq;
  if (name == "distractors") return ProviderTask::kDistractors;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown provider task '" + std::string(name) + "'");
}

std::string request_to_body(const GenerateRequest& req) {
  json j = {{"task", provider_task_name(req.task)},
            {"text", req.text},
            {"answer", nullptr},
            {"polarity", nullptr},
            {"n", req.n}};
  if (req.answer) j["answer"] = *req.answer;
  if (req.polarity) j["polarity"] = *req.polarity;
  return j.dump();
}

GenerateRequest request_from_body(std::string_view body) {
  json j = json::parse(body.begin(), body.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("task") ||
      !j["task"].is_string() || !j.contains("text") || !j["text"].is_string() ||
      !j.contains("n") || !j["n"].is_number_integer()) {
    throw Error(ErrorCode::kInvalidArgument, "malformed generate request");
  }
  GenerateRequest req;
  req.task = parse_provider_task(j["task"].get<std::string>());
  req.text = j["text"].get<std::string>();
  req.n = j["n"].get<int>();
  if (j.contains("answer") && j["answer"].is_string()) {
    req.answer = j["answer"].get<std::string>();
  }
  if (j.contains("polarity") && j["polarity"].is_string()) {
    req.polarity = j["polarity"].get<std::string>();
  }
  return req;
}

std::string response_to_body(const GenerateResponse& resp) {
  json cands = json::array();
  for (const ProviderCandidate& c : resp.candidates) {
    cands.push_back({{"text", c.text}, {"score", c.score}});
  }
  return json{{"candidates", std::move(cands)}}.dump();
}

GenerateResponse parse_generate_response(std::string_view body) {
  auto fail = [](const std::string& why) -> void {
    throw Error(ErrorCode::kProviderProtocolError,
                "provider response rejected: " + why);
  };
  json j = json::parse(body.begin(), body.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) fail("not a JSON object");
  auto it = j.find("candidates");
  if (it == j.end() || !it->is_array()) fail("missing candidates array");

  GenerateResponse resp;
  for (const json& c : *it) {
    if (!c.is_object() || !c.contains("text") || !c["text"].is_string() ||
        !c.contains("score") || !c["score"].is_number()) {
      fail("candidate lacks text or score");
    }
    ProviderCandidate pc{c["text"].get<std::string>(), c["score"].get<double>()};
    if (pc.text.empty()) fail("empty candidate text");
    if (!std::isfinite(pc.score) || pc.score < 0.0 || pc.score > 1.0) {
      fail("score outside [0,1]");
    }
    if (!resp.candidates.empty() && pc.score > resp.candidates.back().score) {
      fail("candidates not sorted by score");
    }
    resp.candidates.push_back(std::move(pc));
  }
  return resp;
}

HttpProvider::HttpProvider(HttpProviderConfig cfg)
    : cfg_(std::move(cfg)),
      slots_(std::clamp(cfg_.max_concurrent, 1, 1024)) {
  const std::string& url = cfg_.base_url;
  size_t scheme = url.find("://");
  size_t host_begin = scheme == std::string::npos ? 0 : scheme + 3;
  size_t slash = url.find('/', host_begin);
  scheme_host_port_ = url.substr(0, slash);
  std::string prefix = slash == std::string::npos ? "" : url.substr(slash);
  while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
  path_ = prefix + "/v1/generate";
  if (url.empty() || !(cfg_.timeout_s > 0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "provider needs a base URL and a positive timeout");
  }
}

std::string HttpProvider::name() const { return scheme_host_port_; }

GenerateResponse HttpProvider::generate(const GenerateRequest& req) {
  slots_.acquire();
  struct Release {
    std::counting_semaphore<1024>& s;
    ~Release() { s.release(); }
  } release{slots_};

  httplib::Client client(scheme_host_port_);
  auto secs = static_cast<time_t>(cfg_.timeout_s);
  auto usecs = static_cast<time_t>((cfg_.timeout_s - secs) * 1e6);
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);

  auto res = client.Post(path_, request_to_body(req), "application/json");
  if (!res) {
    throw Error(ErrorCode::kProviderUnavailable,
                "provider request failed: " + httplib::to_string(res.error()));
  }
  if (res->status >= 500 || res->status == 429) {
    throw Error(ErrorCode::kProviderUnavailable,
                "provider returned HTTP " + std::to_string(res->status));
  }
  if (res->status != 200) {
    throw Error(ErrorCode::kProviderProtocolError,
                "provider returned HTTP " + std::to_string(res->status));
  }
  return parse_generate_response(res->body);
}

}  // namespace lqg
