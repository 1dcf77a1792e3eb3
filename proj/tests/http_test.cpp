// Copyright 2026 The casegraph Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// HTTP chat and embedding clients against an in-process loopback server.

#include <cstdlib>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <gtest/gtest.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "casegraph/backend.hpp"
#include "casegraph/embedding.hpp"
#include "casegraph/pipeline.hpp"
#include "casegraph/transcript.hpp"
#include "expect_error.hpp"

namespace casegraph {
namespace {

using nlohmann::json;

class LoopbackServer {
 public:
  LoopbackServer() {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      record(req);
      const json body = json::parse(req.body);
      const std::string prompt = body["messages"][0]["content"];
      std::string answer = R"({"answer": "FALSE"})";
      if (prompt.find("Identify the patient's presenting problems") != std::string::npos) {
        answer = R"({"presenting_problems": ["insomnia"], "precipitating_factors": ["layoff"]})";
      } else if (prompt.find("(cause): \"layoff\"") != std::string::npos) {
        answer = R"({"answer": "TRUE"})";
      }
      res.set_content(json{{"choices", {{{"message", {{"role", "assistant"}, {"content", answer}}}}}}}.dump(),
                      "application/json");
    });
    server_.Post("/v1/embeddings", [this](const httplib::Request& req, httplib::Response& res) {
      record(req);
      const std::string text = json::parse(req.body)["input"];
      json vec = text == "a" ? json::array({3.0, 4.0}) : json::array({0.0, 2.0});
      res.set_content(json{{"data", {{{"embedding", vec}}}}}.dump(), "application/json");
    });
    server_.Post("/fail", [](const httplib::Request&, httplib::Response& res) { res.status = 503; });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LoopbackServer() {
    server_.stop();
    thread_.join();
  }
  std::string url(const std::string& path) const { return "http://127.0.0.1:" + std::to_string(port_) + path; }
  std::vector<std::string> auth_headers() const {
    std::lock_guard lock(mu_);
    return auth_;
  }
  std::vector<json> bodies() const {
    std::lock_guard lock(mu_);
    return bodies_;
  }

 private:
  void record(const httplib::Request& req) {
    std::lock_guard lock(mu_);
    auth_.push_back(req.get_header_value("Authorization"));
    bodies_.push_back(json::parse(req.body));
  }

  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
  mutable std::mutex mu_;
  std::vector<std::string> auth_;
  std::vector<json> bodies_;
};

BackendConfig config_for(const std::string& endpoint) {
  BackendConfig cfg;
  cfg.endpoint = endpoint;
  cfg.model_name = "test-model";
  cfg.max_retries = 1;
  cfg.request_timeout = std::chrono::milliseconds(2000);
  cfg.api_key_env_var = "CASEGRAPH_TEST_HTTP_KEY";
  return cfg;
}

TEST(HttpChatBackend, SendsChatRequestWithBearerToken) {
  LoopbackServer server;
  ::setenv("CASEGRAPH_TEST_HTTP_KEY", "sekrit", 1);
  HttpChatBackend backend(config_for(server.url("/v1/chat/completions")));
  EXPECT_EQ(backend.complete("hello"), R"({"answer": "FALSE"})");
  ::unsetenv("CASEGRAPH_TEST_HTTP_KEY");
  EXPECT_EQ(backend.complete("hello again"), R"({"answer": "FALSE"})");

  auto auth = server.auth_headers();
  ASSERT_EQ(auth.size(), 2u);
  EXPECT_EQ(auth[0], "Bearer sekrit");
  EXPECT_EQ(auth[1], "");
  const json first = server.bodies()[0];
  EXPECT_EQ(first["model"], "test-model");
  EXPECT_EQ(first["temperature"], 0.0);
  EXPECT_EQ(first["messages"][0]["role"], "user");
}

TEST(HttpChatBackend, HttpErrorsAreTransportErrors) {
  LoopbackServer server;
  HttpChatBackend failing(config_for(server.url("/fail")));
  EXPECT_THROW(failing.complete("x"), TransportError);
  HttpChatBackend refused(config_for("http://127.0.0.1:1/v1/chat/completions"));
  EXPECT_THROW(refused.complete("x"), TransportError);
}

TEST(HttpChatBackend, RequiresEndpoint) {
  EXPECT_ERROR_CODE(HttpChatBackend(BackendConfig{}), ErrorCode::kInvalidConfig);
}

TEST(HttpChatBackend, DrivesTheWholePipeline) {
  LoopbackServer server;
  HttpChatBackend backend(config_for(server.url("/v1/chat/completions")));
  Transcript t = parse_transcript("Therapist: Hi.\nPatient: I have insomnia since the layoff.\n", "http");
  CausalGraph g = generate_graph(t, backend, config_for(server.url("/v1/chat/completions")));
  ASSERT_EQ(g.node_count(), 2u);
  ASSERT_EQ(g.edge_count(), 1u);
  EXPECT_EQ(g.edges()[0].source, "layoff");
  EXPECT_EQ(server.bodies().size(), 3u);
}

TEST(HttpChatBackend, UnreachableEndpointIsBackendUnavailable) {
  HttpChatBackend backend(config_for("http://127.0.0.1:1/v1/chat/completions"));
  Transcript t = parse_transcript("Patient: hello\n", "down");
  EXPECT_ERROR_CODE(generate_graph(t, backend, config_for("http://127.0.0.1:1/v1/chat/completions")),
                    ErrorCode::kBackendUnavailable);
}

TEST(HttpEmbeddingProvider, NormalizesAndFixesDimension) {
  LoopbackServer server;
  EmbeddingEndpointConfig cfg;
  cfg.endpoint = server.url("/v1/embeddings");
  cfg.model_name = "embed";
  HttpEmbeddingProvider provider(cfg);
  Embedding a = provider.embed("a");
  ASSERT_EQ(a.size(), 2u);
  EXPECT_DOUBLE_EQ(a[0], 0.6);
  EXPECT_DOUBLE_EQ(a[1], 0.8);
  EXPECT_EQ(provider.dimension(), 2u);
  EXPECT_DOUBLE_EQ(cosine(a, provider.embed("b")), 0.8);
  EXPECT_EQ(server.bodies()[0]["model"], "embed");
}

}  // namespace
}  // namespace casegraph
