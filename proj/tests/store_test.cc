#include "lectureqg/store.h"

#include <gtest/gtest.h>

#include <atomic>
#include <thread>

#include "lectureqg/error.h"
#include "test_support.h"

namespace lqg {
namespace {

using nlohmann::json;
using testing::code_of;
using testing::TempDir;

TEST(Store, CreateReadUpdate) {
  TempDir dir;
  Store store(dir.path());
  json doc = store.create(Collection::kVideos, "v1", {{"title", "Intro"}});
  EXPECT_EQ(doc["revision"], 1);
  EXPECT_TRUE(store.exists(Collection::kVideos, "v1"));
  EXPECT_EQ(code_of([&] { store.create(Collection::kVideos, "v1", json::object()); }),
            ErrorCode::kAlreadyExists);

  json up = store.update(Collection::kVideos, "v1",
                         [](json& d) { d["title"] = "Intro 2"; }, 1);
  EXPECT_EQ(up["revision"], 2);
  EXPECT_EQ(store.read_required(Collection::kVideos, "v1")["title"], "Intro 2");
  EXPECT_EQ(code_of([&] {
              store.update(Collection::kVideos, "v1", [](json&) {}, 1);
            }),
            ErrorCode::kVersionConflict);
  EXPECT_EQ(code_of([&] { store.read_required(Collection::kVideos, "nope"); }),
            ErrorCode::kNotFound);
}

TEST(Store, RejectsUnsafeIds) {
  TempDir dir;
  Store store(dir.path());
  EXPECT_EQ(code_of([&] { store.create(Collection::kVideos, "../x", json::object()); }),
            ErrorCode::kInvalidArgument);
}

TEST(Store, ErrorMessagesDoNotLeakPaths) {
  TempDir dir;
  Store store(dir.path());
  try {
    store.read_required(Collection::kSegments, "missing");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(std::string(e.what()).find(dir.path().string()), std::string::npos);
  }
}

TEST(Store, VersionHistoryGrowsByOnePerEdit) {
  TempDir dir;
  Store store(dir.path());
  store.create_versioned(Collection::kSegments, "s1", {{"video_id", "v"}}, "v1 text", "ingest");
  for (int k = 1; k <= 5; ++k) {
    store.put_version(Collection::kSegments, "s1", "edit " + std::to_string(k), "teacher", k);
  }
  VersionedText h = store.history(Collection::kSegments, "s1");
  ASSERT_EQ(h.versions.size(), 6u);
  for (size_t i = 0; i < h.versions.size(); ++i) {
    EXPECT_EQ(h.versions[i].version_no, static_cast<int>(i + 1));
    if (i > 0) {
      EXPECT_LE(h.versions[i - 1].edited_at, h.versions[i].edited_at);
    }
  }
  EXPECT_EQ(store.get_version(Collection::kSegments, "s1", 1).text, "v1 text");
  EXPECT_EQ(store.get_version(Collection::kSegments, "s1").text, "edit 5");
  EXPECT_EQ(code_of([&] { store.get_version(Collection::kSegments, "s1", 7); }),
            ErrorCode::kNoSuchVersion);
  // Metadata survives edits.
  EXPECT_EQ(store.read_required(Collection::kSegments, "s1")["video_id"], "v");
}

TEST(Store, StaleEditConflictsButRetryIsIdempotent) {
  TempDir dir;
  Store store(dir.path());
  store.put_version(Collection::kSummaries, "s", "first", "a", 0);
  store.put_version(Collection::kSummaries, "s", "second", "a", 1);
  // Same request again: already applied.
  VersionedText again = store.put_version(Collection::kSummaries, "s", "second", "a", 1);
  EXPECT_EQ(again.head_version(), 2);
  EXPECT_EQ(code_of([&] {
              store.put_version(Collection::kSummaries, "s", "other", "a", 1);
            }),
            ErrorCode::kVersionConflict);
  EXPECT_EQ(code_of([&] {
              store.put_version(Collection::kSummaries, "missing", "x", "a", 3);
            }),
            ErrorCode::kNotFound);
  EXPECT_EQ(code_of([&] {
              store.put_version(Collection::kQuestions, "q", "x", "a", 0);
            }),
            ErrorCode::kInvalidArgument);
}

TEST(Store, ConcurrentEditsOfSameVersionYieldOneConflict) {
  for (int round = 0; round < 20; ++round) {
    TempDir dir;
    Store store(dir.path());
    store.put_version(Collection::kSegments, "s", "base", "a", 0);
    std::atomic<int> conflicts{0};
    std::atomic<int> ok{0};
    auto writer = [&](const std::string& text) {
      try {
        store.put_version(Collection::kSegments, "s", text, "a", 1);
        ++ok;
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kVersionConflict) ++conflicts;
      }
    };
    std::thread t1(writer, "left");
    std::thread t2(writer, "right");
    t1.join();
    t2.join();
    EXPECT_EQ(ok.load(), 1);
    EXPECT_EQ(conflicts.load(), 1);
    EXPECT_EQ(store.history(Collection::kSegments, "s").versions.size(), 2u);
  }
}

TEST(Store, InjectedClockKeepsTimestampsMonotone) {
  TempDir dir;
  TimePoint base = parse_utc("2024-01-01T00:00:00.000Z");
  int calls = 0;
  // Clock goes backwards on the second edit.
  Store store(dir.path(), [&] {
    ++calls;
    return calls == 2 ? base - std::chrono::hours(1) : base;
  });
  store.put_version(Collection::kSegments, "s", "a", "x", 0);
  store.put_version(Collection::kSegments, "s", "b", "x", 1);
  VersionedText h = store.history(Collection::kSegments, "s");
  EXPECT_LE(h.versions[0].edited_at, h.versions[1].edited_at);
}

TEST(Store, ListsVideosByTitle) {
  TempDir dir;
  Store store(dir.path());
  store.create_versioned(Collection::kSegments, "b-0", json::object(), "t", "a");
  store.create(Collection::kVideos, "b", {{"title", "Beta"}, {"segment_ids", {"b-0", "b-1"}}});
  store.create(Collection::kVideos, "a", {{"title", "Alpha"}, {"segment_ids", json::array()}});
  auto vids = store.list_videos();
  ASSERT_EQ(vids.size(), 2u);
  EXPECT_EQ(vids[0].video_id, "a");
  EXPECT_EQ(vids[1].segment_count, 1);
}

TEST(Store, PersistsAcrossInstances) {
  TempDir dir;
  {
    Store store(dir.path());
    store.put_version(Collection::kSegments, "s", "hello", "a", 0);
  }
  Store again(dir.path());
  EXPECT_EQ(again.get_version(Collection::kSegments, "s").text, "hello");
  EXPECT_EQ(again.list_ids(Collection::kSegments), std::vector<std::string>{"s"});
}

}  // namespace
}  // namespace lqg
