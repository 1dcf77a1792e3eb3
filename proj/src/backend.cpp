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

#include "casegraph/backend.hpp"

#include <algorithm>

#include "casegraph/error.hpp"
#include "casegraph/graph_io.hpp"
#include "http_transport.hpp"

namespace casegraph {

using nlohmann::json;

void BackendConfig::validate() const {
  if (parallelism < 1) throw Error(ErrorCode::kInvalidConfig, "parallelism must be >= 1");
  if (max_retries < 0 || max_retries > 10) {
    throw Error(ErrorCode::kInvalidConfig, "max_retries must be within [0, 10]");
  }
  if (!(temperature >= 0.0)) throw Error(ErrorCode::kInvalidConfig, "temperature must be >= 0");
  if (request_timeout.count() <= 0) {
    throw Error(ErrorCode::kInvalidConfig, "request_timeout must be positive");
  }
}

BackendConfig backend_config_from_json(const json& doc, BackendConfig base) {
  if (!doc.is_object()) throw Error(ErrorCode::kInvalidConfig, "backend config must be an object");
  try {
    if (doc.contains("endpoint")) base.endpoint = doc["endpoint"].get<std::string>();
    if (doc.contains("model_name")) base.model_name = doc["model_name"].get<std::string>();
    if (doc.contains("temperature")) base.temperature = doc["temperature"].get<double>();
    if (doc.contains("max_retries")) base.max_retries = doc["max_retries"].get<int>();
    if (doc.contains("request_timeout")) {
      base.request_timeout = std::chrono::milliseconds(
          static_cast<long long>(doc["request_timeout"].get<double>() * 1000.0));
    }
    if (doc.contains("parallelism")) base.parallelism = doc["parallelism"].get<int>();
    if (doc.contains("api_key_env_var")) base.api_key_env_var = doc["api_key_env_var"].get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kInvalidConfig, e.what());
  }
  base.validate();
  return base;
}

ScriptedBackend::ScriptedBackend(std::vector<Rule> rules, std::string fallback,
                                 std::vector<std::string> sequence)
    : rules_(std::move(rules)), fallback_(std::move(fallback)), sequence_(std::move(sequence)) {}

ScriptedBackend ScriptedBackend::from_json(const json& fixture) {
  if (!fixture.is_object()) throw Error(ErrorCode::kSchemaViolation, "mock fixture must be an object");
  try {
    std::vector<Rule> rules;
    if (fixture.contains("rules")) {
      for (const auto& r : fixture["rules"]) {
        Rule rule;
        rule.contains = r.at("contains").get<std::vector<std::string>>();
        if (r.at("responses").is_string()) {
          rule.responses.push_back(r["responses"].get<std::string>());
        } else {
          rule.responses = r["responses"].get<std::vector<std::string>>();
        }
        if (rule.responses.empty()) {
          throw Error(ErrorCode::kSchemaViolation, "mock rule has no responses");
        }
        rules.push_back(std::move(rule));
      }
    }
    std::vector<std::string> sequence;
    if (fixture.contains("sequence")) sequence = fixture["sequence"].get<std::vector<std::string>>();
    std::string fallback = fixture.value("default", std::string());
    return ScriptedBackend(std::move(rules), std::move(fallback), std::move(sequence));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaViolation, std::string("mock fixture: ") + e.what());
  }
}

ScriptedBackend ScriptedBackend::from_file(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) {
    throw Error(ErrorCode::kMalformedDocument, path.string() + " is not valid JSON");
  }
  return from_json(doc);
}

std::string ScriptedBackend::complete(std::string_view prompt) {
  calls_.fetch_add(1);
  std::string response;
  {
    std::lock_guard lock(mu_);
    log_.emplace_back(prompt);
    if (sequence_pos_ < sequence_.size()) {
      response = sequence_[sequence_pos_++];
    } else {
      auto it = seen_.find(prompt);
      if (it == seen_.end()) it = seen_.emplace(std::string(prompt), 0).first;
      const std::size_t occurrence = it->second++;
      const Rule* match = nullptr;
      for (const auto& rule : rules_) {
        const bool all = std::all_of(rule.contains.begin(), rule.contains.end(),
                                     [&](const std::string& needle) {
                                       return prompt.find(needle) != std::string_view::npos;
                                     });
        if (all) {
          match = &rule;
          break;
        }
      }
      response = match ? match->responses[std::min(occurrence, match->responses.size() - 1)]
                       : fallback_;
    }
  }
  if (response == "!unavailable") throw TransportError("scripted transport failure");
  return response;
}

std::vector<std::string> ScriptedBackend::prompts() const {
  std::lock_guard lock(mu_);
  return log_;
}

HttpChatBackend::HttpChatBackend(BackendConfig config) : config_(std::move(config)) {
  config_.validate();
  if (config_.endpoint.empty()) throw Error(ErrorCode::kInvalidConfig, "endpoint is required");
}

std::string HttpChatBackend::complete(std::string_view prompt) {
  json request = {{"model", config_.model_name},
                  {"messages", json::array({{{"role", "user"}, {"content", std::string(prompt)}}})},
                  {"temperature", config_.temperature},
                  {"stream", false}};
  const std::string body = detail::http_post_json(config_.endpoint, request.dump(),
                                                  config_.api_key_env_var, config_.request_timeout);
  return completion_text_from_response(body);
}

std::string completion_text_from_response(std::string_view body) {
  json doc = json::parse(body.begin(), body.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw TransportError("completion response is not a JSON object");
  }
  if (doc.contains("choices") && doc["choices"].is_array() && !doc["choices"].empty()) {
    const json& choice = doc["choices"][0];
    if (choice.contains("message") && choice["message"].contains("content") &&
        choice["message"]["content"].is_string()) {
      return choice["message"]["content"].get<std::string>();
    }
    if (choice.contains("text") && choice["text"].is_string()) return choice["text"].get<std::string>();
  }
  if (doc.contains("completion") && doc["completion"].is_string()) {
    return doc["completion"].get<std::string>();
  }
  throw TransportError("completion response has no completion text");
}

}  // namespace casegraph
