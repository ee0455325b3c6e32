#include "lectureqg/store.h"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lectureqg/error.h"

namespace lqg {

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr Collection kAllCollections[] = {
    Collection::kVideos,   Collection::kSegments,  Collection::kSummaries,
    Collection::kKeywords, Collection::kQuestions, Collection::kRatings,
};

bool is_versioned(Collection c) {
  return c == Collection::kSegments || c == Collection::kSummaries;
}

std::string doc_label(Collection c, const std::string& id) {
  return std::string(collection_dir(c)) + "/" + id;
}

[[noreturn]] void not_found(Collection c, const std::string& id) {
  throw Error(ErrorCode::kNotFound, doc_label(c, id) + " not found");
}

std::atomic<uint64_t> temp_counter{0};

}  // namespace

std::string_view collection_dir(Collection c) {
  switch (c) {
    case Collection::kVideos: return "videos";
    case Collection::kSegments: return "segments";
    case Collection::kSummaries: return "summaries";
    case Collection::kKeywords: return "keywords";
    case Collection::kQuestions: return "questions";
    case Collection::kRatings: return "ratings";
  }
  return "unknown";
}

json versioned_to_json(const VersionedText& v) {
  json versions = json::array();
  for (const TextVersion& tv : v.versions) {
    versions.push_back({{"version_no", tv.version_no},
                        {"text", tv.text},
                        {"edited_at", tv.edited_at},
                        {"author", tv.author}});
  }
  return {{"doc_id", v.doc_id}, {"versions", std::move(versions)}};
}

VersionedText versioned_from_json(const json& j) {
  VersionedText v;
  v.doc_id = j.at("doc_id").get<std::string>();
  for (const json& e : j.at("versions")) {
    TextVersion tv;
    tv.version_no = e.at("version_no").get<int>();
    tv.text = e.at("text").get<std::string>();
    tv.edited_at = e.at("edited_at").get<std::string>();
    tv.author = e.at("author").get<std::string>();
    v.versions.push_back(std::move(tv));
  }
  return v;
}

Store::Store(fs::path root, Clock clock)
    : root_(std::move(root)), clock_(std::move(clock)) {
  if (!clock_) clock_ = [] { return std::chrono::system_clock::now(); };
  std::error_code ec;
  for (Collection c : kAllCollections) {
    fs::create_directories(root_ / collection_dir(c), ec);
    if (ec) {
      throw Error(ErrorCode::kIoError, "store root is not writable");
    }
  }
}

TimePoint Store::now() const { return clock_(); }

fs::path Store::path_for(Collection c, const std::string& id) const {
  require_valid_id(id, collection_dir(c));
  return root_ / collection_dir(c) / (id + ".json");
}

std::mutex& Store::lock_for(Collection c, const std::string& id) {
  std::lock_guard<std::mutex> guard(locks_mu_);
  auto& slot = locks_[doc_label(c, id)];
  if (!slot) slot = std::make_unique<std::mutex>();
  return *slot;
}

void Store::write_atomic(const fs::path& path, const json& doc) {
  fs::path tmp = path.parent_path() /
                 ("." + path.filename().string() + ".tmp-" +
                  std::to_string(::getpid()) + "-" +
                  std::to_string(temp_counter.fetch_add(1)));
  std::string body = doc.dump(2);
  body += '\n';
  FILE* f = std::fopen(tmp.c_str(), "wb");
  if (f == nullptr) throw Error(ErrorCode::kIoError, "cannot write document");
  bool ok = std::fwrite(body.data(), 1, body.size(), f) == body.size();
  ok = std::fflush(f) == 0 && ok;
  ok = ::fsync(::fileno(f)) == 0 && ok;
  ok = std::fclose(f) == 0 && ok;
  std::error_code ec;
  if (ok) fs::rename(tmp, path, ec);
  if (!ok || ec) {
    fs::remove(tmp, ec);
    throw Error(ErrorCode::kIoError, "cannot write document");
  }
}

std::optional<json> Store::read(Collection c, const std::string& id) const {
  fs::path path = path_for(c, id);
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream buf;
  buf << in.rdbuf();
  json doc = json::parse(buf.str(), nullptr, false);
  if (doc.is_discarded()) {
    throw Error(ErrorCode::kMalformedDocument,
                doc_label(c, id) + " is not valid JSON");
  }
  return doc;
}

json Store::read_required(Collection c, const std::string& id) const {
  auto doc = read(c, id);
  if (!doc) not_found(c, id);
  return std::move(*doc);
}

bool Store::exists(Collection c, const std::string& id) const {
  return fs::exists(path_for(c, id));
}

std::vector<std::string> Store::list_ids(Collection c) const {
  std::vector<std::string> ids;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(root_ / collection_dir(c), ec)) {
    std::string name = entry.path().filename().string();
    if (name.empty() || name.front() == '.') continue;
    if (entry.path().extension() != ".json") continue;
    ids.push_back(entry.path().stem().string());
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

json Store::create(Collection c, const std::string& id, json doc) {
  fs::path path = path_for(c, id);
  std::lock_guard<std::mutex> guard(lock_for(c, id));
  if (fs::exists(path)) {
    throw Error(ErrorCode::kAlreadyExists, doc_label(c, id) + " already exists");
  }
  doc["revision"] = 1;
  write_atomic(path, doc);
  return doc;
}

json Store::update(Collection c, const std::string& id,
                   const std::function<void(json&)>& mutate,
                   std::optional<int64_t> expected_revision) {
  fs::path path = path_for(c, id);
  std::lock_guard<std::mutex> guard(lock_for(c, id));
  json doc = read_required(c, id);
  int64_t revision = doc.value("revision", int64_t{0});
  if (expected_revision && *expected_revision != revision) {
    throw Error(ErrorCode::kVersionConflict,
                doc_label(c, id) + " is at revision " +
                    std::to_string(revision) + ", expected " +
                    std::to_string(*expected_revision));
  }
  mutate(doc);
  doc["revision"] = revision + 1;
  write_atomic(path, doc);
  return doc;
}

VersionedText Store::put_version(Collection c, const std::string& doc_id,
                                 const std::string& new_text,
                                 const std::string& author,
                                 int expected_version) {
  if (!is_versioned(c)) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(collection_dir(c)) + " documents are not versioned");
  }
  if (expected_version < 0) {
    throw Error(ErrorCode::kInvalidArgument, "expected_version must be >= 0");
  }
  fs::path path = path_for(c, doc_id);
  std::lock_guard<std::mutex> guard(lock_for(c, doc_id));
  auto current = read(c, doc_id);
  std::string stamp = format_utc(now());

  if (!current) {
    if (expected_version != 0) not_found(c, doc_id);
    VersionedText v{doc_id, {{1, new_text, stamp, author}}};
    json doc = {{"doc_id", doc_id}, {"revision", 1}, {"text", versioned_to_json(v)}};
    write_atomic(path, doc);
    return v;
  }

  VersionedText v = versioned_from_json(current->at("text"));
  const int head = v.head_version();
  // A retried request whose effect is already the head succeeds unchanged.
  if (expected_version + 1 == head && v.head().text == new_text &&
      v.head().author == author) {
    return v;
  }
  if (expected_version != head) {
    throw Error(ErrorCode::kVersionConflict,
                doc_label(c, doc_id) + " is at version " +
                    std::to_string(head) + ", expected " +
                    std::to_string(expected_version));
  }
  if (!v.versions.empty() && stamp < v.head().edited_at) {
    stamp = v.head().edited_at;
  }
  v.versions.push_back({head + 1, new_text, stamp, author});
  (*current)["text"] = versioned_to_json(v);
  (*current)["revision"] = current->value("revision", int64_t{0}) + 1;
  write_atomic(path, *current);
  return v;
}

VersionedText Store::create_versioned(Collection c, const std::string& doc_id,
                                      json meta, const std::string& text,
                                      const std::string& author) {
  if (!is_versioned(c)) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string(collection_dir(c)) + " documents are not versioned");
  }
  fs::path path = path_for(c, doc_id);
  std::lock_guard<std::mutex> guard(lock_for(c, doc_id));
  if (fs::exists(path)) {
    throw Error(ErrorCode::kAlreadyExists,
                doc_label(c, doc_id) + " already exists");
  }
  VersionedText v{doc_id, {{1, text, format_utc(now()), author}}};
  if (!meta.is_object()) meta = json::object();
  meta["doc_id"] = doc_id;
  meta["revision"] = 1;
  meta["text"] = versioned_to_json(v);
  write_atomic(path, meta);
  return v;
}

VersionedText Store::history(Collection c, const std::string& doc_id) const {
  json doc = read_required(c, doc_id);
  if (!doc.contains("text")) {
    throw Error(ErrorCode::kInvalidArgument,
                doc_label(c, doc_id) + " has no version history");
  }
  return versioned_from_json(doc.at("text"));
}

TextVersion Store::get_version(Collection c, const std::string& doc_id,
                               int version_no) const {
  VersionedText v = history(c, doc_id);
  if (version_no == kLatest) return v.head();
  if (version_no < 1 || version_no > v.head_version()) {
    throw Error(ErrorCode::kNoSuchVersion,
                doc_label(c, doc_id) + " has no version " +
                    std::to_string(version_no));
  }
  return v.versions[static_cast<size_t>(version_no - 1)];
}

std::vector<VideoListing> Store::list_videos() const {
  std::vector<VideoListing> out;
  for (const std::string& id : list_ids(Collection::kVideos)) {
    auto doc = read(Collection::kVideos, id);
    if (!doc) continue;
    VideoListing v;
    v.video_id = id;
    v.title = doc->value("title", std::string());
    for (const json& sid : doc->value("segment_ids", json::array())) {
      if (exists(Collection::kSegments, sid.get<std::string>())) {
        ++v.segment_count;
      }
    }
    out.push_back(std::move(v));
  }
  std::sort(out.begin(), out.end(),
            [](const VideoListing& a, const VideoListing& b) {
              if (a.title != b.title) return a.title < b.title;
              return a.video_id < b.video_id;
            });
  return out;
}

}  // namespace lqg
