#ifndef LECTUREQG_STORE_H_
#define LECTUREQG_STORE_H_

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "lectureqg/util.h"

namespace lqg {

// On-disk layout: one directory per collection under the store root, one
// JSON file per entity named {id}.json.
enum class Collection {
  kVideos,
  kSegments,
  kSummaries,
  kKeywords,
  kQuestions,
  kRatings,
};

std::string_view collection_dir(Collection c);

// Selects the head version in get_version().
inline constexpr int kLatest = 0;

struct TextVersion {
  int version_no = 0;
  std::string text;
  std::string edited_at;
  std::string author;
};

// Append-only edit history. Version numbers start at 1 and are dense.
struct VersionedText {
  std::string doc_id;
  std::vector<TextVersion> versions;

  const TextVersion& head() const { return versions.back(); }
  int head_version() const {
    return versions.empty() ? 0 : versions.back().version_no;
  }
};

nlohmann::json versioned_to_json(const VersionedText& v);
VersionedText versioned_from_json(const nlohmann::json& j);

struct VideoListing {
  std::string video_id;
  std::string title;
  int segment_count = 0;
};

class Store {
 public:
  using Clock = std::function<TimePoint()>;

  explicit Store(std::filesystem::path root, Clock clock = {});

  Store(const Store&) = delete;
  Store& operator=(const Store&) = delete;

  const std::filesystem::path& root() const { return root_; }
  TimePoint now() const;

  // -- Plain documents ------------------------------------------------------

  std::optional<nlohmann::json> read(Collection c, const std::string& id) const;
  // Throws NotFound.
  nlohmann::json read_required(Collection c, const std::string& id) const;
  bool exists(Collection c, const std::string& id) const;
  std::vector<std::string> list_ids(Collection c) const;

  // Creates a new document with "revision": 1. Throws AlreadyExists.
  nlohmann::json create(Collection c, const std::string& id,
                        nlohmann::json doc);

  // Compare-and-set update keyed on the document's "revision" field. When
  // expected_revision is given and differs from the stored one, throws
  // VersionConflict. The revision is bumped on every successful update.
  nlohmann::json update(Collection c, const std::string& id,
                        const std::function<void(nlohmann::json&)>& mutate,
                        std::optional<int64_t> expected_revision = {});

  // -- Versioned text (the "text" field of segment and summary documents) --

  // Appends version expected_version + 1. expected_version == 0 creates the
  // document. Resending an edit that is already the head is a no-op.
  // Throws VersionConflict, NotFound.
  VersionedText put_version(Collection c, const std::string& doc_id,
                            const std::string& new_text,
                            const std::string& author, int expected_version);

  // Creates a versioned document whose version 1 is `text`, with extra
  // top-level fields taken from `meta`. Throws AlreadyExists.
  VersionedText create_versioned(Collection c, const std::string& doc_id,
                                 nlohmann::json meta, const std::string& text,
                                 const std::string& author);

  // Throws NotFound, NoSuchVersion.
  TextVersion get_version(Collection c, const std::string& doc_id,
                          int version_no = kLatest) const;
  VersionedText history(Collection c, const std::string& doc_id) const;

  // -- Videos ---------------------------------------------------------------

  // Ordered by title, then id. Counts only segment documents that exist.
  std::vector<VideoListing> list_videos() const;

 private:
  std::filesystem::path path_for(Collection c, const std::string& id) const;
  std::mutex& lock_for(Collection c, const std::string& id);
  void write_atomic(const std::filesystem::path& path,
                    const nlohmann::json& doc);

  std::filesystem::path root_;
  Clock clock_;
  std::mutex locks_mu_;
  std::map<std::string, std::unique_ptr<std::mutex>> locks_;
};

}  // namespace lqg

#endif  // LECTUREQG_STORE_H_
