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

// Chat-completion backends: the contract, a scripted mock driven by a
// fixture file, and an HTTP client for OpenAI-style endpoints.

#pragma once

#include <atomic>
#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace casegraph {

struct BackendConfig {
  std::string endpoint;
  std::string model_name;
  double temperature = 0.0;
  int max_retries = 2;
  std::chrono::milliseconds request_timeout{60000};
  int parallelism = 1;
  std::string api_key_env_var = "CASEGRAPH_API_KEY";

  // Throws InvalidConfig: parallelism >= 1, 0 <= max_retries <= 10,
  // temperature >= 0.
  void validate() const;
};

// Reads {endpoint, model_name, temperature, max_retries, request_timeout
// (seconds), parallelism, api_key_env_var}; absent keys keep `base` values.
BackendConfig backend_config_from_json(const nlohmann::json& doc, BackendConfig base = {});

// Transport-level failure (connection refused, HTTP error, timeout). The
// pipeline retries these and escalates to BackendUnavailable.
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  // Must be safe to call concurrently. Throws TransportError.
  virtual std::string complete(std::string_view prompt) = 0;
};

// Deterministic canned-response backend.
//
// Fixture (JSON):
//   {
//     "sequence": ["...", ...],                       optional, served in call order first
//     "rules": [{"contains": ["a", "b"], "responses": ["...", ...]}, ...],
//     "default": "..."                                optional
//   }
//
// A prompt is answered by the first rule whose "contains" substrings all
// occur in it. The k-th time the same prompt text is seen, the rule answers
// responses[min(k, size-1)], so retries can be scripted and concurrency
// cannot change what a prompt receives. The response "!unavailable"
// simulates a transport failure.
class ScriptedBackend : public ChatBackend {
 public:
  struct Rule {
    std::vector<std::string> contains;
    std::vector<std::string> responses;
  };

  ScriptedBackend() = default;
  ScriptedBackend(std::vector<Rule> rules, std::string fallback,
                  std::vector<std::string> sequence = {});

  static ScriptedBackend from_json(const nlohmann::json& fixture);
  static ScriptedBackend from_file(const std::filesystem::path& path);

  std::string complete(std::string_view prompt) override;

  std::size_t call_count() const { return calls_.load(); }
  std::vector<std::string> prompts() const;

 private:
  std::vector<Rule> rules_;
  std::string fallback_;
  std::vector<std::string> sequence_;

  mutable std::mutex mu_;
  std::size_t sequence_pos_ = 0;
  std::map<std::string, std::size_t, std::less<>> seen_;
  std::vector<std::string> log_;
  std::atomic<std::size_t> calls_{0};
};

// POSTs {"model", "messages": [{"role": "user", "content": prompt}],
// "temperature"} to the configured endpoint and returns
// choices[0].message.content (or choices[0].text, or "completion"). Sends a
// bearer token when the environment variable named in the config is set.
class HttpChatBackend : public ChatBackend {
 public:
  explicit HttpChatBackend(BackendConfig config);
  std::string complete(std::string_view prompt) override;

 private:
  BackendConfig config_;
};

// Pulls the completion text out of a chat/completions response body. Throws
// TransportError on unexpected shapes.
std::string completion_text_from_response(std::string_view body);

}  // namespace casegraph
