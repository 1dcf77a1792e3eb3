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

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "casegraph/backend.hpp"
#include "casegraph/embedding.hpp"

namespace casegraph {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsageError = 2;

// Environment fallbacks, consulted after flags and the --config file.
inline constexpr const char* kBackendEnvVar = "CASEGRAPH_BACKEND";
inline constexpr const char* kEmbedderEnvVar = "CASEGRAPH_EMBEDDER";

// "mock" (hash provider, 64 dims), "mock:<dim>", "table:<path>", or the path
// of a JSON file {endpoint, model_name, api_key_env_var, request_timeout}.
// Throws InvalidConfig.
std::unique_ptr<EmbeddingProvider> make_embedder(const std::string& spec);

struct BackendHandle {
  std::unique_ptr<ChatBackend> backend;
  BackendConfig config;
};

// "mock:<fixture>" (".json" is appended when the bare path does not exist)
// or the path of a JSON backend config file. Throws InvalidConfig.
BackendHandle make_backend(const std::string& spec);

// Runs one subcommand. `args` excludes the program name. Documents go to
// `out` unless --out names a file; warnings and errors go to `err` as one
// JSON object per line. Returns kExitOk, kExitDomainError or
// kExitUsageError.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace casegraph
