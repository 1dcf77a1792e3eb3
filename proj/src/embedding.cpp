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

#include "casegraph/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include <nlohmann/json.hpp>

#include "casegraph/backend.hpp"
#include "casegraph/error.hpp"
#include "casegraph/graph_io.hpp"
#include "http_transport.hpp"

namespace casegraph {

Embedding normalized(Embedding v) {
  double norm = 0;
  for (double x : v) norm += x * x;
  norm = std::sqrt(norm);
  if (!(norm > 1e-12)) throw Error(ErrorCode::kZeroMeanVector, "cannot normalize a zero vector");
  for (double& x : v) x /= norm;
  return v;
}

double cosine(const Embedding& a, const Embedding& b) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (!(na > 0) || !(nb > 0)) throw Error(ErrorCode::kZeroMeanVector, "cosine with a zero vector");
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

namespace {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

HashEmbeddingProvider::HashEmbeddingProvider(std::size_t dimension) : dimension_(dimension) {
  if (dimension_ == 0) throw Error(ErrorCode::kInvalidConfig, "embedding dimension must be positive");
}

Embedding HashEmbeddingProvider::embed(std::string_view text) {
  std::uint64_t state = fnv1a(text);
  Embedding v(dimension_);
  for (auto& x : v) {
    x = static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53 * 2.0 - 1.0;
  }
  return normalized(std::move(v));
}

TableEmbeddingProvider::TableEmbeddingProvider(std::map<std::string, Embedding, std::less<>> table)
    : table_(std::move(table)) {
  for (auto& [text, vec] : table_) {
    if (dimension_ == 0) dimension_ = vec.size();
    if (vec.size() != dimension_ || vec.empty()) {
      throw Error(ErrorCode::kLengthMismatch, "embedding for '" + text + "' has dimension " +
                                                  std::to_string(vec.size()));
    }
    vec = normalized(std::move(vec));
  }
}

TableEmbeddingProvider TableEmbeddingProvider::parse(std::string_view document) {
  std::map<std::string, Embedding, std::less<>> table;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < document.size()) {
    std::size_t end = document.find('\n', pos);
    if (end == std::string_view::npos) end = document.size();
    std::string_view line = document.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.rfind('\t');
    if (tab == std::string_view::npos) {
      throw Error(ErrorCode::kMalformedDocument, "embedding table line " + std::to_string(line_no) + ": no tab");
    }
    Embedding vec;
    std::string_view values = line.substr(tab + 1);
    while (!values.empty()) {
      const auto comma = values.find(',');
      const std::string field(values.substr(0, comma));
      char* parse_end = nullptr;
      const double x = std::strtod(field.c_str(), &parse_end);
      if (parse_end == field.c_str()) {
        throw Error(ErrorCode::kMalformedDocument,
                    "embedding table line " + std::to_string(line_no) + ": bad number '" + field + "'");
      }
      vec.push_back(x);
      if (comma == std::string_view::npos) break;
      values.remove_prefix(comma + 1);
    }
    table.insert_or_assign(std::string(line.substr(0, tab)), std::move(vec));
  }
  return TableEmbeddingProvider(std::move(table));
}

TableEmbeddingProvider TableEmbeddingProvider::from_file(const std::filesystem::path& path) {
  return parse(read_file(path));
}

Embedding TableEmbeddingProvider::embed(std::string_view text) {
  auto it = table_.find(text);
  if (it == table_.end()) {
    throw Error(ErrorCode::kUnknownText, "no embedding for '" + std::string(text) + "'");
  }
  return it->second;
}

HttpEmbeddingProvider::HttpEmbeddingProvider(EmbeddingEndpointConfig config)
    : config_(std::move(config)) {
  if (config_.endpoint.empty()) throw Error(ErrorCode::kInvalidConfig, "embedding endpoint is required");
}

Embedding HttpEmbeddingProvider::embed(std::string_view text) {
  nlohmann::json request = {{"model", config_.model_name}, {"input", std::string(text)}};
  const std::string body = detail::http_post_json(config_.endpoint, request.dump(),
                                                  config_.api_key_env_var, config_.request_timeout);
  auto doc = nlohmann::json::parse(body, nullptr, false);
  const nlohmann::json* vec = nullptr;
  if (!doc.is_discarded() && doc.is_object()) {
    if (doc.contains("data") && doc["data"].is_array() && !doc["data"].empty() &&
        doc["data"][0].contains("embedding")) {
      vec = &doc["data"][0]["embedding"];
    } else if (doc.contains("embedding")) {
      vec = &doc["embedding"];
    }
  }
  if (vec == nullptr || !vec->is_array()) throw TransportError("embedding response has no vector");
  Embedding v;
  for (const auto& x : *vec) {
    if (!x.is_number()) throw TransportError("embedding response has a non-numeric entry");
    v.push_back(x.get<double>());
  }
  v = normalized(std::move(v));
  std::lock_guard lock(mu_);
  if (dimension_ == 0) dimension_ = v.size();
  if (v.size() != dimension_) {
    throw Error(ErrorCode::kLengthMismatch, "endpoint changed embedding dimension");
  }
  return v;
}

std::size_t HttpEmbeddingProvider::dimension() const {
  std::lock_guard lock(mu_);
  return dimension_;
}

Embedding CachingEmbeddingProvider::embed(std::string_view text) {
  {
    std::lock_guard lock(mu_);
    if (auto it = cache_.find(std::string(text)); it != cache_.end()) return it->second;
  }
  Embedding v = inner_.embed(text);
  std::lock_guard lock(mu_);
  return cache_.emplace(std::string(text), std::move(v)).first->second;
}

}  // namespace casegraph
