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

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "casegraph/graph.hpp"

namespace casegraph {

// Graph document:
//   {"annotator_id": str|null, "edges": [{"provenance", "source", "target"}],
//    "nodes": [{"category", "id", "label", "provenance"}], "origin": "human"|"automated",
//    "session_id": str}
// Keys are emitted in sorted order and elements in canonical order, so equal
// graphs always serialize to the same bytes.
nlohmann::json to_json(const CausalGraph& graph);
CausalGraph graph_from_json(const nlohmann::json& document);

// Two-space indented document with a trailing newline.
std::string serialize(const CausalGraph& graph);
// Throws MalformedDocument (with byte offset), SchemaViolation, or any
// build_graph error.
CausalGraph deserialize(std::string_view document);

CausalGraph load_graph(const std::filesystem::path& path);
void save_graph(const CausalGraph& graph, const std::filesystem::path& path);

enum class ExportFormat { kDot, kGraphMl };

std::string export_graph(const CausalGraph& graph, ExportFormat format);

// Shared file helpers; throw Error(kIo).
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace casegraph
