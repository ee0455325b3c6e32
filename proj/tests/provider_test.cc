#include "lectureqg/provider.h"

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "lectureqg/error.h"
#include "test_support.h"

namespace lqg {
namespace {

using nlohmann::json;
using testing::code_of;
using testing::StubProviderServer;

TEST(WireFormat, RequestRoundTrip) {
  GenerateRequest req;
  req.task = ProviderTask::kBoolq;
  req.text = "Grass is green.";
  req.polarity = "no";
  req.n = 3;
  json body = json::parse(request_to_body(req));
  EXPECT_EQ(body["task"], "boolq");
  EXPECT_TRUE(body["answer"].is_null());
  EXPECT_EQ(body["polarity"], "no");
  GenerateRequest back = request_from_body(request_to_body(req));
  EXPECT_EQ(back.task, ProviderTask::kBoolq);
  EXPECT_EQ(back.polarity, "no");
  EXPECT_FALSE(back.answer.has_value());
  EXPECT_EQ(back.n, 3);
}

TEST(WireFormat, ResponseValidation) {
  auto parse = [](const std::string& body) {
    return [body] { parse_generate_response(body); };
  };
  EXPECT_EQ(parse_generate_response(R"({"candidates":[]})").candidates.size(), 0u);
  auto ok = parse_generate_response(
      R"({"candidates":[{"text":"a","score":0.9},{"text":"b","score":0.9}]})");
  EXPECT_EQ(ok.candidates.size(), 2u);
  EXPECT_EQ(code_of(parse("nope")), ErrorCode::kProviderProtocolError);
  EXPECT_EQ(code_of(parse(R"({"items":[]})")), ErrorCode::kProviderProtocolError);
  EXPECT_EQ(code_of(parse(R"({"candidates":[{"text":"a"}]})")),
            ErrorCode::kProviderProtocolError);
  EXPECT_EQ(code_of(parse(R"({"candidates":[{"text":"a","score":1.5}]})")),
            ErrorCode::kProviderProtocolError);
  EXPECT_EQ(code_of(parse(R"({"candidates":[{"text":"","score":0.5}]})")),
            ErrorCode::kProviderProtocolError);
  EXPECT_EQ(code_of(parse(
                R"({"candidates":[{"text":"a","score":0.1},{"text":"b","score":0.2}]})")),
            ErrorCode::kProviderProtocolError);
  EXPECT_EQ(code_of([] { request_from_body(R"({"task":"poem","text":"x","n":1})"); }),
            ErrorCode::kInvalidArgument);
}

TEST(HttpProvider, TalksToStub) {
  StubProviderServer stub;
  HttpProvider p({stub.url(), 5.0, 2});
  GenerateRequest req;
  req.task = ProviderTask::kSaq;
  req.text = "Linux is a kernel.";
  req.answer = "Linux";
  req.n = 2;
  GenerateResponse r = p.generate(req);
  ASSERT_EQ(r.candidates.size(), 2u);
  EXPECT_GE(r.candidates[0].score, r.candidates[1].score);
  EXPECT_EQ(stub.requests.load(), 1);
}

TEST(HttpProvider, MapsFailures) {
  StubProviderServer stub;
  HttpProvider p({stub.url(), 5.0, 2});
  GenerateRequest req;
  req.text = "x";
  stub.status_override = 503;
  EXPECT_EQ(code_of([&] { p.generate(req); }), ErrorCode::kProviderUnavailable);
  stub.status_override = 400;
  EXPECT_EQ(code_of([&] { p.generate(req); }), ErrorCode::kProviderProtocolError);

  // Nothing listens on this port once the probe server is gone.
  int dead_port;
  {
    httplib::Server probe;
    dead_port = probe.bind_to_any_port("127.0.0.1");
  }
  HttpProvider dead({"http://127.0.0.1:" + std::to_string(dead_port), 1.0, 1});
  EXPECT_EQ(code_of([&] { dead.generate(req); }), ErrorCode::kProviderUnavailable);
  EXPECT_EQ(code_of([] { HttpProvider bad({"", 1.0, 1}); }), ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace lqg
