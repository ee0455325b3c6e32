#include "lectureqg/config.h"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "lectureqg/error.h"
#include "lectureqg/summarize.h"

namespace lqg {

using json = nlohmann::json;

void ApiConfig::validate() const {
  auto positive = [](bool ok, const char* name) {
    if (!ok) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("config: ") + name + " must be positive");
    }
  };
  positive(listen_port > 0 && listen_port < 65536, "listen_port");
  positive(provider_timeout_s > 0, "provider_timeout_s");
  positive(provider_max_concurrent > 0 && provider_max_concurrent <= 1024,
           "provider_max_concurrent");
  positive(max_segment_duration_s > 0, "max_segment_duration_s");
  positive(top_n > 0, "top_n");
  positive(distractor_count > 0, "distractor_count");
  positive(blq_per_polarity > 0, "blq_per_polarity");
  positive(keyword_limit > 0, "keyword_limit");
  positive(summary_max_words > 0, "summary_max_words");
  if (!(summary_ratio > 0 && summary_ratio <= 1)) {
    throw Error(ErrorCode::kInvalidArgument,
                "config: summary_ratio must be in (0, 1]");
  }
  if (store_root.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "config: store_root is empty");
  }
  parse_summary_backend(summary_backend);
}

json config_to_json(const ApiConfig& c) {
  return {{"listen_host", c.listen_host},
          {"listen_port", c.listen_port},
          {"store_root", c.store_root},
          {"provider_base_url", c.provider_base_url},
          {"provider_timeout_s", c.provider_timeout_s},
          {"provider_max_concurrent", c.provider_max_concurrent},
          {"max_segment_duration_s", c.max_segment_duration_s},
          {"top_n", c.top_n},
          {"distractor_count", c.distractor_count},
          {"blq_per_polarity", c.blq_per_polarity},
          {"keyword_limit", c.keyword_limit},
          {"summary_ratio", c.summary_ratio},
          {"summary_max_words", c.summary_max_words},
          {"summary_backend", c.summary_backend},
          {"lexicon_dir", c.lexicon_dir}};
}

ApiConfig config_from_json(const json& j) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kInvalidArgument, "config must be a JSON object");
  }
  ApiConfig c;
  const json known = config_to_json(c);
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) {
      throw Error(ErrorCode::kInvalidArgument, "config: unknown key '" + key + "'");
    }
  }
  json merged = known;
  merged.update(j);
  try {
    c.listen_host = merged["listen_host"].get<std::string>();
    c.listen_port = merged["listen_port"].get<int>();
    c.store_root = merged["store_root"].get<std::string>();
    c.provider_base_url = merged["provider_base_url"].get<std::string>();
    c.provider_timeout_s = merged["provider_timeout_s"].get<double>();
    c.provider_max_concurrent = merged["provider_max_concurrent"].get<int>();
    c.max_segment_duration_s = merged["max_segment_duration_s"].get<double>();
    c.top_n = merged["top_n"].get<int>();
    c.distractor_count = merged["distractor_count"].get<int>();
    c.blq_per_polarity = merged["blq_per_polarity"].get<int>();
    c.keyword_limit = merged["keyword_limit"].get<int>();
    c.summary_ratio = merged["summary_ratio"].get<double>();
    c.summary_max_words = merged["summary_max_words"].get<int>();
    c.summary_backend = merged["summary_backend"].get<std::string>();
    c.lexicon_dir = merged["lexicon_dir"].get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("config: wrong value type: ") + e.what());
  }
  c.validate();
  return c;
}

ApiConfig load_config(const std::optional<std::filesystem::path>& path) {
  std::filesystem::path p;
  if (path) {
    p = *path;
  } else if (const char* env = std::getenv(kConfigEnvVar); env && *env) {
    p = env;
  } else {
    return ApiConfig{};
  }
  std::ifstream in(p);
  if (!in) {
    throw Error(ErrorCode::kIoError, "cannot read config file " + p.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  json j = json::parse(ss.str(), nullptr, false);
  if (j.is_discarded()) {
    throw Error(ErrorCode::kInvalidArgument,
                "config file " + p.string() + " is not valid JSON");
  }
  return config_from_json(j);
}

}  // namespace lqg
