// Command-line front end: batch ingest, the REST server, batch question
// generation and analytics export.

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "lectureqg/analytics.h"
#include "lectureqg/config.h"
#include "lectureqg/error.h"
#include "lectureqg/provider.h"
#include "lectureqg/server.h"
#include "lectureqg/store.h"
#include "lectureqg/workflow.h"

namespace {

using lqg::ApiConfig;
using nlohmann::json;

struct Options {
  std::string config_path;
  std::string store_root;
  std::string provider_url;
};

ApiConfig resolve_config(const Options& o) {
  ApiConfig cfg = o.config_path.empty()
                      ? lqg::load_config()
                      : lqg::load_config(std::filesystem::path(o.config_path));
  if (!o.store_root.empty()) cfg.store_root = o.store_root;
  if (!o.provider_url.empty()) cfg.provider_base_url = o.provider_url;
  cfg.validate();
  return cfg;
}

std::unique_ptr<lqg::GenerativeProvider> make_provider(const ApiConfig& cfg) {
  if (cfg.provider_base_url.empty()) return nullptr;
  return std::make_unique<lqg::HttpProvider>(lqg::HttpProviderConfig{
      cfg.provider_base_url, cfg.provider_timeout_s,
      cfg.provider_max_concurrent});
}

// Owns the pieces a Workflow borrows.
struct Session {
  explicit Session(const ApiConfig& cfg)
      : store(cfg.store_root), provider(make_provider(cfg)) {
    if (!cfg.lexicon_dir.empty()) {
      lexicon = std::make_unique<lqg::Lexicon>(lqg::Lexicon::defaults());
      lexicon->load_overrides(cfg.lexicon_dir);
    }
    workflow = std::make_unique<lqg::Workflow>(
        store, cfg, provider.get(),
        lexicon ? *lexicon : lqg::Lexicon::defaults());
  }

  lqg::Store store;
  std::unique_ptr<lqg::GenerativeProvider> provider;
  std::unique_ptr<lqg::Lexicon> lexicon;
  std::unique_ptr<lqg::Workflow> workflow;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw lqg::Error(lqg::ErrorCode::kIoError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

lqg::TranscriptFormat format_for(const std::string& path,
                                 const std::string& requested) {
  if (requested != "auto") return lqg::parse_transcript_format(requested);
  const bool json_ext = path.size() >= 5 &&
                        path.compare(path.size() - 5, 5, ".json") == 0;
  return json_ext ? lqg::TranscriptFormat::kTimedJson
                  : lqg::TranscriptFormat::kPlainText;
}

int run_ingest(const Options& o, const std::vector<std::string>& paths,
               const std::string& format, const std::string& author) {
  Session s(resolve_config(o));
  int ok = 0;
  for (const std::string& path : paths) {
    try {
      lqg::IngestResult r = s.workflow->ingest(read_file(path),
                                               format_for(path, format), "",
                                               "", author);
      ++ok;
      std::cout << "ok    " << path << "  video=" << r.video_id
                << "  segments=" << r.segment_ids.size()
                << (r.already_present ? "  (already present)" : "") << '\n';
    } catch (const lqg::Error& e) {
      std::cout << "error " << path << "  " << lqg::error_code_name(e.code())
                << ": " << e.what() << '\n';
    }
  }
  std::cout << ok << " of " << paths.size() << " file(s) ingested\n";
  return ok == 0 ? 1 : 0;
}

lqg::ApiServer* g_server = nullptr;

void on_signal(int) {
  if (g_server != nullptr) g_server->stop();
}

int run_serve(const Options& o, std::string host, int port) {
  ApiConfig cfg = resolve_config(o);
  if (!host.empty()) cfg.listen_host = host;
  if (port > 0) cfg.listen_port = port;
  Session s(cfg);
  lqg::ApiServer server(*s.workflow);
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cerr << "listening on " << cfg.listen_host << ':' << cfg.listen_port
            << (s.provider ? " with provider " + cfg.provider_base_url
                           : std::string(" without a provider"))
            << '\n';
  if (!server.listen(cfg.listen_host, cfg.listen_port)) {
    std::cerr << "cannot listen on " << cfg.listen_host << ':'
              << cfg.listen_port << '\n';
    return 1;
  }
  g_server = nullptr;
  return 0;
}

int run_generate(const Options& o, const std::string& only_video,
                 const std::string& author) {
  Session s(resolve_config(o));
  lqg::Workflow& wf = *s.workflow;
  int sets = 0;
  int failures = 0;
  auto attempt = [&](const std::string& seg, const char* what, auto&& fn) {
    try {
      fn();
      ++sets;
    } catch (const lqg::Error& e) {
      ++failures;
      std::cout << "  " << seg << " " << what << ": "
                << lqg::error_code_name(e.code()) << ": " << e.what() << '\n';
    }
  };
  for (const lqg::VideoListing& v : wf.list_videos()) {
    if (!only_video.empty() && v.video_id != only_video) continue;
    std::cout << v.video_id << " (" << v.title << ")\n";
    for (const json& seg : wf.list_segments(v.video_id)) {
      const std::string id = seg.at("segment_id").get<std::string>();
      try {
        if (!seg.value("has_summary", false)) wf.summarize(id, {}, author);
      } catch (const lqg::Error& e) {
        ++failures;
        std::cout << "  " << id << " summary: " << e.what() << '\n';
        continue;
      }
      lqg::KeywordListing kw = wf.keywords(id);
      if (!kw.recommended.empty()) {
        lqg::GenerateParams p;
        p.qtype = lqg::QuestionType::kMcq;
        p.keyword = kw.recommended.front().phrase;
        attempt(id, "SAQ/MCQ", [&] { wf.generate(id, p, author); });
      }
      for (lqg::QuestionType t :
           {lqg::QuestionType::kBlq, lqg::QuestionType::kGfq}) {
        lqg::GenerateParams p;
        p.qtype = t;
        attempt(id, std::string(lqg::question_type_name(t)).c_str(),
                [&] { wf.generate(id, p, author); });
      }
    }
  }
  std::cout << sets << " generation run(s), " << failures << " failure(s)\n";
  return 0;
}

int run_analytics_export(const Options& o, const std::string& format,
                         const std::string& output) {
  Session s(resolve_config(o));
  lqg::RatingSummary summary = s.workflow->rating_summary();
  lqg::KeywordLengthHistogram hist = s.workflow->keyword_histogram();
  std::string text;
  if (format == "csv") {
    text = lqg::analytics_to_csv(summary, hist);
  } else {
    text = json{{"ratings", lqg::rating_summary_to_json(summary)},
                {"keyword_lengths", lqg::histogram_to_json(hist)}}
               .dump(2) +
           "\n";
  }
  if (output.empty() || output == "-") {
    std::cout << text;
  } else {
    std::ofstream out(output, std::ios::binary);
    if (!out) {
      throw lqg::Error(lqg::ErrorCode::kIoError, "cannot write " + output);
    }
    out << text;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Question generation from lecture transcripts"};
  app.require_subcommand(1);
  Options opts;
  app.add_option("--config", opts.config_path,
                 std::string("JSON config file (default: $") +
                     lqg::kConfigEnvVar + ")");
  app.add_option("--store", opts.store_root, "Store root directory");
  app.add_option("--provider", opts.provider_url,
                 "Generative provider base URL");

  std::vector<std::string> paths;
  std::string format = "auto";
  std::string author = "cli";
  auto* ingest = app.add_subcommand("ingest", "Ingest transcript files");
  ingest->add_option("files", paths, "Transcript files")->required();
  ingest->add_option("--format", format, "timed_json, plain_text or auto")
      ->check(CLI::IsMember({"auto", "timed_json", "plain_text"}));
  ingest->add_option("--author", author, "Author recorded on version 1");

  std::string host;
  int port = 0;
  auto* serve = app.add_subcommand("serve", "Run the REST API");
  serve->add_option("--host", host, "Listen address");
  serve->add_option("--port", port, "Listen port");

  std::string video;
  auto* generate =
      app.add_subcommand("generate", "Generate questions for every segment");
  generate->add_option("--video", video, "Restrict to one video id");
  generate->add_option("--author", author, "Author recorded on new documents");

  auto* analytics = app.add_subcommand("analytics", "Rating statistics");
  analytics->require_subcommand(1);
  std::string out_format = "json";
  std::string output;
  auto* exp = analytics->add_subcommand("export", "Export summaries");
  exp->add_option("--format", out_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  exp->add_option("-o,--output", output, "Output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) return run_ingest(opts, paths, format, author);
    if (*serve) return run_serve(opts, host, port);
    if (*generate) return run_generate(opts, video, author);
    if (*exp) return run_analytics_export(opts, out_format, output);
  } catch (const lqg::Error& e) {
    std::cerr << "error: " << lqg::error_code_name(e.code()) << ": " << e.what()
              << '\n';
    return 1;
  }
  return 0;
}
