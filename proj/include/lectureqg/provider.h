#ifndef LECTUREQG_PROVIDER_H_
#define LECTUREQG_PROVIDER_H_

#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace lqg {

// Client side of the generative-model wire protocol:
//
//   POST {base_url}/v1/generate
//   {"task": "summarize"|"saq"|"boolq"|"distractors", "text": string,
//    "answer": string|null, "polarity": "yes"|"no"|null, "n": integer}
//   -> {"candidates": [{"text": string, "score": number in [0,1]}, ...]}
//
// Candidates arrive sorted by score, highest first.

enum class ProviderTask { kSummarize, kSaq, kBoolq, kDistractors };

std::string_view provider_task_name(ProviderTask task);
ProviderTask parse_provider_task(std::string_view name);

struct GenerateRequest {
  ProviderTask task = ProviderTask::kSummarize;
  std::string text;
  std::optional<std::string> answer;
  std::optional<std::string> polarity;
  int n = 1;
};

struct ProviderCandidate {
  std::string text;
  double score = 0.0;
};

struct GenerateResponse {
  std::vector<ProviderCandidate> candidates;
};

std::string request_to_body(const GenerateRequest& req);
// Throws InvalidArgument on a malformed request body.
GenerateRequest request_from_body(std::string_view body);
std::string response_to_body(const GenerateResponse& resp);
// Throws ProviderProtocolError.
GenerateResponse parse_generate_response(std::string_view body);

class GenerativeProvider {
 public:
  virtual ~GenerativeProvider() = default;
  virtual std::string name() const = 0;
  // Throws ProviderUnavailable or ProviderProtocolError.
  virtual GenerateResponse generate(const GenerateRequest& req) = 0;
};

struct HttpProviderConfig {
  std::string base_url;  // e.g. http://127.0.0.1:8081
  double timeout_s = 30.0;
  int max_concurrent = 4;
};

class HttpProvider : public GenerativeProvider {
 public:
  explicit HttpProvider(HttpProviderConfig cfg);

  std::string name() const override;
  GenerateResponse generate(const GenerateRequest& req) override;

 private:
  HttpProviderConfig cfg_;
  std::string scheme_host_port_;
  std::string path_;
  std::counting_semaphore<1024> slots_;
};

}  // namespace lqg

#endif  // LECTUREQG_PROVIDER_H_
