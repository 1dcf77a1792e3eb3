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

// Two-stage graph generation: one factor-extraction call, then one causal
// verification call per candidate (cause, effect) pair with the edges
// accepted so far fed back into each prompt.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "casegraph/backend.hpp"
#include "casegraph/graph.hpp"
#include "casegraph/transcript.hpp"
#include "casegraph/warning_log.hpp"

namespace casegraph {

// Keys of the extraction payload, in category order.
inline constexpr const char* kPresentingKey = "presenting_problems";
inline constexpr const char* kPredisposingKey = "predisposing_factors";
inline constexpr const char* kPrecipitatingKey = "precipitating_factors";
inline constexpr const char* kPerpetuatingKey = "perpetuating_factors";

struct ExtractionResult {
  std::vector<std::string> presenting;
  std::vector<std::string> predisposing;
  std::vector<std::string> precipitating;
  std::vector<std::string> perpetuating;

  std::size_t size() const {
    return presenting.size() + predisposing.size() + precipitating.size() + perpetuating.size();
  }
};

struct EdgeQuery {
  FactorNode source;
  FactorNode target;
  std::optional<bool> verdict;
  int attempts = 0;
};

// First balanced {...} in `text` that parses as a JSON object. Prose and
// code fences around it are ignored.
std::optional<nlohmann::json> find_json_object(std::string_view text);

std::string build_extraction_prompt(const Transcript& transcript);

// Missing keys give empty lists; blank phrases are dropped and repeats within
// a category removed case-insensitively. Throws NoParsablePayload or
// WrongPayloadShape.
ExtractionResult parse_extraction_response(std::string_view response);

// All ordered (u, v), u != v, sorted by (u.id, v.id). Same-category pairs
// only when `include_within_category`.
std::vector<std::pair<FactorNode, FactorNode>> enumerate_candidate_pairs(
    const std::vector<FactorNode>& nodes, bool include_within_category = false);

// `known_edges` are (cause label, effect label); rendered sorted.
std::string build_edge_prompt(const EdgeQuery& query, const Transcript& transcript,
                              std::vector<std::pair<std::string, std::string>> known_edges);

// Throws UnparsableVerdict.
bool parse_edge_response(std::string_view response);

// One extraction call, retried up to cfg.max_retries on unusable output.
// Phrases become nodes (id = slug of the label) and duplicates across
// categories are dropped, first category winning, with a warning. Returned
// sorted by id. Throws ExtractionFailed, BackendUnavailable or
// InvalidTranscript.
std::vector<FactorNode> extract_nodes(const Transcript& transcript, ChatBackend& backend,
                                      const BackendConfig& cfg, WarningLog* log = nullptr);

// Asks about every candidate pair. Each prompt carries the edges accepted
// among pairs earlier in canonical order, regardless of cfg.parallelism: with
// more than one worker, prompts are issued speculatively and re-issued when
// an earlier pair was accepted in the meantime. Unparsable verdicts become
// FALSE with a warning. An accepted edge's provenance is the union of its
// endpoints' turns. Throws BackendUnavailable when every attempt for a pair
// fails at the transport level.
std::vector<CausalEdge> verify_edges(const std::vector<FactorNode>& nodes,
                                     const Transcript& transcript, ChatBackend& backend,
                                     const BackendConfig& cfg, bool include_within_category = false,
                                     WarningLog* log = nullptr,
                                     std::vector<EdgeQuery>* trace = nullptr);

CausalGraph generate_graph(const Transcript& transcript, ChatBackend& backend,
                           const BackendConfig& cfg, bool include_within_category = false,
                           WarningLog* log = nullptr);

}  // namespace casegraph
