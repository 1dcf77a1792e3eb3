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

// Causal case-formulation graph: 5P-labelled factor nodes joined by directed
// cause -> effect edges, plus the undirected simple projection that the
// structural metrics work on.

#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace casegraph {

enum class FactorCategory {
  kPresenting,
  kPredisposing,
  kPrecipitating,
  kPerpetuating,
  kProtective,
};

inline constexpr std::array<FactorCategory, 5> kAllCategories = {
    FactorCategory::kPresenting, FactorCategory::kPredisposing,
    FactorCategory::kPrecipitating, FactorCategory::kPerpetuating,
    FactorCategory::kProtective};

// Lowercase wire name ("presenting", ...).
std::string_view to_string(FactorCategory category);
std::optional<FactorCategory> parse_category(std::string_view name);

enum class GraphOrigin { kHuman, kAutomated };

std::string_view to_string(GraphOrigin origin);
std::optional<GraphOrigin> parse_origin(std::string_view name);

struct FactorNode {
  std::string id;
  std::string label;
  FactorCategory category = FactorCategory::kPresenting;
  std::vector<int> provenance;  // supporting transcript turn indices

  friend bool operator==(const FactorNode&, const FactorNode&) = default;
};

struct CausalEdge {
  std::string source;
  std::string target;
  std::vector<int> provenance;

  friend bool operator==(const CausalEdge&, const CausalEdge&) = default;
};

// Immutable, validated causal graph. Nodes are held sorted by id and edges by
// (source, target); every consumer relies on that order for reproducible
// output. Construct through build_graph().
class CausalGraph {
 public:
  CausalGraph() = default;

  const std::string& session_id() const { return session_id_; }
  GraphOrigin origin() const { return origin_; }
  const std::optional<std::string>& annotator_id() const { return annotator_id_; }
  const std::vector<FactorNode>& nodes() const { return nodes_; }
  const std::vector<CausalEdge>& edges() const { return edges_; }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  // Position of `id` in nodes(), or nullopt.
  std::optional<std::size_t> index_of(std::string_view id) const;
  const FactorNode& node(std::string_view id) const;  // throws UnknownNode

  friend bool operator==(const CausalGraph&, const CausalGraph&) = default;

 private:
  friend CausalGraph build_graph(std::string session_id, std::vector<FactorNode> nodes,
                                 std::vector<CausalEdge> edges, GraphOrigin origin,
                                 std::optional<std::string> annotator_id);

  std::string session_id_;
  GraphOrigin origin_ = GraphOrigin::kHuman;
  std::optional<std::string> annotator_id_;
  std::vector<FactorNode> nodes_;
  std::vector<CausalEdge> edges_;
};

// Validates and canonicalizes. Throws Error with DuplicateNodeId, EmptyLabel,
// SelfLoop, DuplicateEdge or DanglingEdgeEndpoint. Provenance lists are sorted
// and deduplicated. Cycles are accepted.
CausalGraph build_graph(std::string session_id, std::vector<FactorNode> nodes,
                        std::vector<CausalEdge> edges, GraphOrigin origin,
                        std::optional<std::string> annotator_id = std::nullopt);

// Undirected simple graph over string ids. Ids are kept sorted so index order
// equals lexicographic id order; each edge is stored once as (u, v) with u < v.
class SimpleGraph {
 public:
  SimpleGraph() = default;

  // `ids` must be strictly increasing. Throws SelfLoop / DuplicateEdge /
  // UnknownNode on bad edges.
  SimpleGraph(std::vector<std::string> ids,
              std::vector<std::pair<std::size_t, std::size_t>> edges);

  std::size_t node_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<std::string>& ids() const { return ids_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& edges() const { return edges_; }
  const std::vector<std::size_t>& neighbors(std::size_t v) const { return adjacency_[v]; }
  std::size_t degree(std::size_t v) const { return adjacency_[v].size(); }
  bool has_edge(std::size_t u, std::size_t v) const;
  std::optional<std::size_t> index_of(std::string_view id) const;

 private:
  std::vector<std::string> ids_;
  std::vector<std::pair<std::size_t, std::size_t>> edges_;
  std::vector<std::vector<std::size_t>> adjacency_;  // sorted
};

// Ids "v000", "v001", ... for n nodes; handy for synthetic graphs.
SimpleGraph make_simple_graph(std::size_t n,
                              const std::vector<std::pair<std::size_t, std::size_t>>& edges);

// Antiparallel edges collapse to one undirected edge.
SimpleGraph undirected_projection(const CausalGraph& graph);

struct NodeDegree {
  std::size_t in = 0;
  std::size_t out = 0;
  std::size_t total = 0;

  friend bool operator==(const NodeDegree&, const NodeDegree&) = default;
};

// One entry per node, in node order.
std::vector<NodeDegree> degree_sequences(const CausalGraph& graph);

// Lowercase ASCII alphanumerics with single '-' separators; "factor" if
// nothing survives.
std::string slugify(std::string_view label);

// slugify(label), suffixed "-2", "-3", ... until it is not in `taken`. The
// returned id is inserted into `taken`.
std::string unique_node_id(std::string_view label, std::set<std::string>& taken);

}  // namespace casegraph
