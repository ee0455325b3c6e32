#ifndef LECTUREQG_SERVER_H_
#define LECTUREQG_SERVER_H_

#include <memory>
#include <string>

#include <nlohmann/json.hpp>

#include "lectureqg/error.h"
#include "lectureqg/workflow.h"

namespace lqg {

// JSON shapes shared by the HTTP layer and the CLI.
nlohmann::json candidate_to_json(const KeywordCandidate& c);
nlohmann::json ingest_result_to_json(const IngestResult& r);
nlohmann::json video_listing_to_json(const std::vector<VideoListing>& v);
// {"error": {"code", "message"}, "hint"?}
nlohmann::json error_body(const Error& e);

// REST front end over a Workflow. Error codes map onto HTTP statuses via
// http_status_for(); bodies never carry store paths.
class ApiServer {
 public:
  explicit ApiServer(Workflow& workflow);
  ~ApiServer();

  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  // Blocks until stop(). Returns false when the address cannot be bound.
  bool listen(const std::string& host, int port);
  // Binds an ephemeral port and returns it, or -1.
  int bind_any_port(const std::string& host);
  // Serves on a socket bound by bind_any_port(). Blocks until stop().
  bool listen_after_bind();
  void wait_until_ready();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace lqg

#endif  // LECTUREQG_SERVER_H_
