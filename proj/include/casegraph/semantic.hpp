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

// Wording-independent comparison of two causal graphs through text
// embeddings of node labels and verbalized edges.

#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "casegraph/embedding.hpp"
#include "casegraph/graph.hpp"

namespace casegraph {

inline constexpr const char* kDefaultEdgeTemplate = "{source} causes {target}";
inline constexpr std::size_t kDefaultTopK = 5;

struct SemanticOptions {
  // "{source}" and "{target}" are replaced by the endpoint labels.
  std::string edge_template = kDefaultEdgeTemplate;
  std::size_t top_k = kDefaultTopK;
};

struct BestMatch {
  std::string text;
  std::string matched_text;
  double cosine = 0;
};

// Best-match rows for one direction: each text on the left against every
// text on the right.
struct MatchTable {
  std::vector<BestMatch> rows;
  double mean = 0;
};

// edge_similarity = (forward.mean + backward.mean) / 2, where forward has
// one row per edge of the first graph.
struct SimilarityBreakdown {
  double edge_similarity = 0;
  double node_set_similarity = 0;
  double node_centrality_similarity = 0;
  MatchTable forward_edges;
  MatchTable backward_edges;
};

// Throws UnknownEdge when `edge` is not in `graph`.
std::string edge_text(const CausalEdge& edge, const CausalGraph& graph,
                      const std::string& edge_template = kDefaultEdgeTemplate);

MatchTable best_matches(const std::vector<std::string>& left, const std::vector<std::string>& right,
                        EmbeddingProvider& provider);

// Symmetric mean of directional best-match averages over edge texts.
// Throws EdgelessGraph.
double edge_similarity(const CausalGraph& a, const CausalGraph& b, EmbeddingProvider& provider,
                       const SemanticOptions& options = {});

// Cosine of the mean node-label embeddings. Throws EmptyGraph or
// ZeroMeanVector.
double node_set_similarity(const CausalGraph& a, const CausalGraph& b, EmbeddingProvider& provider);

// Labels of the top-min(k, n) nodes by total degree (ties by id ascending).
std::vector<std::string> prominent_labels(const CausalGraph& graph, std::size_t k);

// Symmetric best-match over prominent labels. Throws EmptyGraph.
double node_centrality_similarity(const CausalGraph& a, const CausalGraph& b,
                                  EmbeddingProvider& provider, std::size_t k = kDefaultTopK);

// All three measures plus the edge match tables. Throws like the pieces.
SimilarityBreakdown semantic_breakdown(const CausalGraph& a, const CausalGraph& b,
                                       EmbeddingProvider& provider, const SemanticOptions& options = {});

nlohmann::json to_json(const MatchTable& table);

}  // namespace casegraph
