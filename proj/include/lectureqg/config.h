#ifndef LECTUREQG_CONFIG_H_
#define LECTUREQG_CONFIG_H_

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

namespace lqg {

// Environment variable naming a JSON config file.
inline constexpr const char* kConfigEnvVar = "LECTUREQG_CONFIG";

struct ApiConfig {
  std::string listen_host = "127.0.0.1";
  int listen_port = 8080;
  std::string store_root = "lectureqg-data";

  // Empty disables the provider; generation then uses built-in fallbacks.
  std::string provider_base_url;
  double provider_timeout_s = 30.0;
  int provider_max_concurrent = 4;

  double max_segment_duration_s = 300.0;
  int top_n = 3;
  int distractor_count = 3;
  int blq_per_polarity = 3;
  int keyword_limit = 20;
  double summary_ratio = 0.2;
  int summary_max_words = 100;
  std::string summary_backend = "extractive_builtin";
  // Optional directory of word-list overrides for the text toolkit.
  std::string lexicon_dir;

  // Throws InvalidArgument when a tunable is out of range.
  void validate() const;
};

nlohmann::json config_to_json(const ApiConfig& c);
// Unknown keys are rejected so typos do not silently fall back to defaults.
// Throws InvalidArgument.
ApiConfig config_from_json(const nlohmann::json& j);

// Reads `path` if given, else the file named by LECTUREQG_CONFIG, else
// returns defaults. Throws InvalidArgument, IoError.
ApiConfig load_config(const std::optional<std::filesystem::path>& path = {});

}  // namespace lqg

#endif  // LECTUREQG_CONFIG_H_
