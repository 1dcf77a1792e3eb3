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

#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace casegraph {

using Embedding = std::vector<double>;

// Maps text to a unit-norm vector of fixed dimension. Implementations are
// deterministic per text and safe to call concurrently.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual Embedding embed(std::string_view text) = 0;
  virtual std::size_t dimension() const = 0;
};

// Pseudo-random unit vector seeded by a 64-bit FNV-1a hash of the text.
// Identical text gives a bit-identical vector on every platform; different
// texts give nearly orthogonal vectors in high dimension.
class HashEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit HashEmbeddingProvider(std::size_t dimension = 64);
  Embedding embed(std::string_view text) override;
  std::size_t dimension() const override { return dimension_; }

 private:
  std::size_t dimension_;
};

// Fixed lookup table, one "text<TAB>v1,v2,...,vd" per line. Blank lines and
// lines starting with '#' are skipped; vectors are normalized on load.
// Unknown text throws UnknownText.
class TableEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit TableEmbeddingProvider(std::map<std::string, Embedding, std::less<>> table);
  static TableEmbeddingProvider parse(std::string_view document);
  static TableEmbeddingProvider from_file(const std::filesystem::path& path);

  Embedding embed(std::string_view text) override;
  std::size_t dimension() const override { return dimension_; }

 private:
  std::map<std::string, Embedding, std::less<>> table_;
  std::size_t dimension_ = 0;
};

struct EmbeddingEndpointConfig {
  std::string endpoint;
  std::string model_name;
  std::string api_key_env_var = "CASEGRAPH_API_KEY";
  std::chrono::milliseconds request_timeout{60000};
};

// POSTs {"model", "input"} and reads data[0].embedding (or "embedding").
// The dimension is fixed by the first reply.
class HttpEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit HttpEmbeddingProvider(EmbeddingEndpointConfig config);
  Embedding embed(std::string_view text) override;
  std::size_t dimension() const override;

 private:
  EmbeddingEndpointConfig config_;
  mutable std::mutex mu_;
  std::size_t dimension_ = 0;
};

// Memoizes another provider by exact text.
class CachingEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit CachingEmbeddingProvider(EmbeddingProvider& inner) : inner_(inner) {}
  Embedding embed(std::string_view text) override;
  std::size_t dimension() const override { return inner_.dimension(); }

 private:
  EmbeddingProvider& inner_;
  std::mutex mu_;
  std::unordered_map<std::string, Embedding> cache_;
};

// Throws ZeroMeanVector for the zero vector.
Embedding normalized(Embedding v);
double cosine(const Embedding& a, const Embedding& b);

}  // namespace casegraph
