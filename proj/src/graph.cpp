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

#include "casegraph/graph.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <tuple>

#include "casegraph/error.hpp"

namespace casegraph {

std::string_view to_string(FactorCategory category) {
  switch (category) {
    case FactorCategory::kPresenting: return "presenting";
    case FactorCategory::kPredisposing: return "predisposing";
    case FactorCategory::kPrecipitating: return "precipitating";
    case FactorCategory::kPerpetuating: return "perpetuating";
    case FactorCategory::kProtective: return "protective";
  }
  return "presenting";
}

std::optional<FactorCategory> parse_category(std::string_view name) {
  for (FactorCategory c : kAllCategories) {
    if (to_string(c) == name) return c;
  }
  return std::nullopt;
}

std::string_view to_string(GraphOrigin origin) {
  return origin == GraphOrigin::kHuman ? "human" : "automated";
}

std::optional<GraphOrigin> parse_origin(std::string_view name) {
  if (name == "human") return GraphOrigin::kHuman;
  if (name == "automated") return GraphOrigin::kAutomated;
  return std::nullopt;
}

namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

void canonicalize(std::vector<int>& provenance) {
  std::sort(provenance.begin(), provenance.end());
  provenance.erase(std::unique(provenance.begin(), provenance.end()), provenance.end());
}

}  // namespace

std::optional<std::size_t> CausalGraph::index_of(std::string_view id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const FactorNode& n, std::string_view key) { return n.id < key; });
  if (it == nodes_.end() || it->id != id) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

const FactorNode& CausalGraph::node(std::string_view id) const {
  auto idx = index_of(id);
  if (!idx) throw Error(ErrorCode::kUnknownNode, "no node with id '" + std::string(id) + "'");
  return nodes_[*idx];
}

CausalGraph build_graph(std::string session_id, std::vector<FactorNode> nodes,
                        std::vector<CausalEdge> edges, GraphOrigin origin,
                        std::optional<std::string> annotator_id) {
  for (const auto& n : nodes) {
    if (is_blank(n.label)) {
      throw Error(ErrorCode::kEmptyLabel, "node '" + n.id + "' has an empty label");
    }
  }
  std::sort(nodes.begin(), nodes.end(),
            [](const FactorNode& a, const FactorNode& b) { return a.id < b.id; });
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (nodes[i].id == nodes[i - 1].id) {
      throw Error(ErrorCode::kDuplicateNodeId, "node id '" + nodes[i].id + "' appears twice");
    }
  }
  for (auto& n : nodes) canonicalize(n.provenance);

  auto has_node = [&](const std::string& id) {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), id,
                               [](const FactorNode& n, const std::string& key) { return n.id < key; });
    return it != nodes.end() && it->id == id;
  };
  for (auto& e : edges) {
    if (e.source == e.target) {
      throw Error(ErrorCode::kSelfLoop, "edge '" + e.source + "' -> '" + e.target + "'");
    }
    for (const std::string* end : {&e.source, &e.target}) {
      if (!has_node(*end)) {
        throw Error(ErrorCode::kDanglingEdgeEndpoint,
                    "edge '" + e.source + "' -> '" + e.target + "' references unknown node '" +
                        *end + "'");
      }
    }
    canonicalize(e.provenance);
  }
  std::sort(edges.begin(), edges.end(), [](const CausalEdge& a, const CausalEdge& b) {
    return std::tie(a.source, a.target) < std::tie(b.source, b.target);
  });
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (edges[i].source == edges[i - 1].source && edges[i].target == edges[i - 1].target) {
      throw Error(ErrorCode::kDuplicateEdge,
                  "edge '" + edges[i].source + "' -> '" + edges[i].target + "' appears twice");
    }
  }

  CausalGraph g;
  g.session_id_ = std::move(session_id);
  g.origin_ = origin;
  g.annotator_id_ = std::move(annotator_id);
  g.nodes_ = std::move(nodes);
  g.edges_ = std::move(edges);
  return g;
}

SimpleGraph::SimpleGraph(std::vector<std::string> ids,
                         std::vector<std::pair<std::size_t, std::size_t>> edges)
    : ids_(std::move(ids)), adjacency_(ids_.size()) {
  for (std::size_t i = 1; i < ids_.size(); ++i) {
    if (!(ids_[i - 1] < ids_[i])) {
      throw Error(ErrorCode::kDuplicateNodeId, "ids must be strictly increasing near '" + ids_[i] + "'");
    }
  }
  for (auto [u, v] : edges) {
    if (u >= ids_.size() || v >= ids_.size()) {
      throw Error(ErrorCode::kUnknownNode, "edge endpoint out of range");
    }
    if (u == v) throw Error(ErrorCode::kSelfLoop, "node '" + ids_[u] + "'");
    if (u > v) std::swap(u, v);
    edges_.emplace_back(u, v);
  }
  std::sort(edges_.begin(), edges_.end());
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i] == edges_[i - 1]) {
      throw Error(ErrorCode::kDuplicateEdge,
                  "'" + ids_[edges_[i].first] + "' -- '" + ids_[edges_[i].second] + "'");
    }
  }
  for (auto [u, v] : edges_) {
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
  }
  for (auto& nbrs : adjacency_) std::sort(nbrs.begin(), nbrs.end());
}

bool SimpleGraph::has_edge(std::size_t u, std::size_t v) const {
  const auto& nbrs = adjacency_[u];
  return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::optional<std::size_t> SimpleGraph::index_of(std::string_view id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<std::size_t>(it - ids_.begin());
}

SimpleGraph make_simple_graph(std::size_t n,
                              const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "v%03zu", i);
    ids.emplace_back(buf);
  }
  return SimpleGraph(std::move(ids), edges);
}

SimpleGraph undirected_projection(const CausalGraph& graph) {
  std::vector<std::string> ids;
  ids.reserve(graph.node_count());
  for (const auto& n : graph.nodes()) ids.push_back(n.id);

  std::set<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& e : graph.edges()) {
    std::size_t u = *graph.index_of(e.source);
    std::size_t v = *graph.index_of(e.target);
    pairs.emplace(std::min(u, v), std::max(u, v));
  }
  return SimpleGraph(std::move(ids), {pairs.begin(), pairs.end()});
}

std::vector<NodeDegree> degree_sequences(const CausalGraph& graph) {
  std::vector<NodeDegree> degrees(graph.node_count());
  for (const auto& e : graph.edges()) {
    ++degrees[*graph.index_of(e.source)].out;
    ++degrees[*graph.index_of(e.target)].in;
  }
  for (auto& d : degrees) d.total = d.in + d.out;
  return degrees;
}

std::string slugify(std::string_view label) {
  std::string slug;
  bool pending_dash = false;
  for (unsigned char c : label) {
    if (std::isalnum(c) && c < 0x80) {
      if (pending_dash && !slug.empty()) slug.push_back('-');
      pending_dash = false;
      slug.push_back(static_cast<char>(std::tolower(c)));
    } else {
      pending_dash = true;
    }
  }
  return slug.empty() ? std::string("factor") : slug;
}

std::string unique_node_id(std::string_view label, std::set<std::string>& taken) {
  const std::string base = slugify(label);
  std::string id = base;
  for (int suffix = 2; taken.count(id) != 0; ++suffix) {
    id = base + "-" + std::to_string(suffix);
  }
  taken.insert(id);
  return id;
}

}  // namespace casegraph
