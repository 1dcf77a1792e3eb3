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

#include "casegraph/semantic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

#include "casegraph/error.hpp"

namespace casegraph {

namespace {

void replace_all(std::string& s, std::string_view from, std::string_view to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size())) {
    s.replace(pos, from.size(), to);
  }
}

std::vector<std::string> edge_texts(const CausalGraph& g, const std::string& tmpl) {
  std::vector<std::string> out;
  out.reserve(g.edge_count());
  for (const auto& e : g.edges()) out.push_back(edge_text(e, g, tmpl));
  return out;
}

void require_edges(const CausalGraph& a, const CausalGraph& b) {
  for (const CausalGraph* g : {&a, &b}) {
    if (g->edge_count() == 0) {
      throw Error(ErrorCode::kEdgelessGraph, "graph '" + g->session_id() + "' has no edges");
    }
  }
}

void require_nodes(const CausalGraph& a, const CausalGraph& b) {
  for (const CausalGraph* g : {&a, &b}) {
    if (g->node_count() == 0) {
      throw Error(ErrorCode::kEmptyGraph, "graph '" + g->session_id() + "' has no nodes");
    }
  }
}

double symmetric_best_match(const std::vector<std::string>& left,
                            const std::vector<std::string>& right, EmbeddingProvider& provider) {
  return 0.5 * (best_matches(left, right, provider).mean + best_matches(right, left, provider).mean);
}

}  // namespace

std::string edge_text(const CausalEdge& edge, const CausalGraph& graph, const std::string& edge_template) {
  const bool present = std::binary_search(
      graph.edges().begin(), graph.edges().end(), edge, [](const CausalEdge& x, const CausalEdge& y) {
        return std::tie(x.source, x.target) < std::tie(y.source, y.target);
      });
  if (!present) {
    throw Error(ErrorCode::kUnknownEdge, "'" + edge.source + "' -> '" + edge.target + "'");
  }
  std::string text = edge_template;
  replace_all(text, "{source}", graph.node(edge.source).label);
  replace_all(text, "{target}", graph.node(edge.target).label);
  return text;
}

MatchTable best_matches(const std::vector<std::string>& left, const std::vector<std::string>& right,
                        EmbeddingProvider& provider) {
  MatchTable table;
  if (left.empty() || right.empty()) return table;
  std::vector<Embedding> right_vecs;
  right_vecs.reserve(right.size());
  for (const auto& t : right) right_vecs.push_back(provider.embed(t));
  double sum = 0;
  for (const auto& t : left) {
    const Embedding v = provider.embed(t);
    BestMatch best{t, right[0], cosine(v, right_vecs[0])};
    for (std::size_t j = 1; j < right.size(); ++j) {
      const double c = cosine(v, right_vecs[j]);
      if (c > best.cosine) {
        best.cosine = c;
        best.matched_text = right[j];
      }
    }
    sum += best.cosine;
    table.rows.push_back(std::move(best));
  }
  table.mean = sum / static_cast<double>(left.size());
  return table;
}

double edge_similarity(const CausalGraph& a, const CausalGraph& b, EmbeddingProvider& provider,
                       const SemanticOptions& options) {
  require_edges(a, b);
  return symmetric_best_match(edge_texts(a, options.edge_template),
                              edge_texts(b, options.edge_template), provider);
}

double node_set_similarity(const CausalGraph& a, const CausalGraph& b, EmbeddingProvider& provider) {
  require_nodes(a, b);
  auto mean_vector = [&](const CausalGraph& g) {
    Embedding mean;
    for (const auto& n : g.nodes()) {
      const Embedding v = provider.embed(n.label);
      if (mean.empty()) mean.assign(v.size(), 0.0);
      for (std::size_t i = 0; i < v.size(); ++i) mean[i] += v[i];
    }
    for (double& x : mean) x /= static_cast<double>(g.node_count());
    return mean;
  };
  const Embedding ma = mean_vector(a);
  const Embedding mb = mean_vector(b);
  auto norm = [](const Embedding& v) { return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0)); };
  if (!(norm(ma) > 1e-12) || !(norm(mb) > 1e-12)) {
    throw Error(ErrorCode::kZeroMeanVector, "mean node embedding is the zero vector");
  }
  return cosine(ma, mb);
}

std::vector<std::string> prominent_labels(const CausalGraph& graph, std::size_t k) {
  const auto degrees = degree_sequences(graph);
  std::vector<std::size_t> order(graph.node_count());
  std::iota(order.begin(), order.end(), 0);
  // Node order is id order, so a stable sort leaves ties by id.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return degrees[x].total > degrees[y].total; });
  order.resize(std::min(k, order.size()));
  std::vector<std::string> labels;
  for (std::size_t i : order) labels.push_back(graph.nodes()[i].label);
  return labels;
}

double node_centrality_similarity(const CausalGraph& a, const CausalGraph& b,
                                  EmbeddingProvider& provider, std::size_t k) {
  require_nodes(a, b);
  if (k == 0) throw Error(ErrorCode::kInvalidConfig, "k must be at least 1");
  return symmetric_best_match(prominent_labels(a, k), prominent_labels(b, k), provider);
}

SimilarityBreakdown semantic_breakdown(const CausalGraph& a, const CausalGraph& b,
                                       EmbeddingProvider& provider, const SemanticOptions& options) {
  require_edges(a, b);
  SimilarityBreakdown s;
  const auto ta = edge_texts(a, options.edge_template);
  const auto tb = edge_texts(b, options.edge_template);
  s.forward_edges = best_matches(ta, tb, provider);
  s.backward_edges = best_matches(tb, ta, provider);
  s.edge_similarity = 0.5 * (s.forward_edges.mean + s.backward_edges.mean);
  s.node_set_similarity = node_set_similarity(a, b, provider);
  s.node_centrality_similarity = node_centrality_similarity(a, b, provider, options.top_k);
  return s;
}

nlohmann::json to_json(const MatchTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"text", r.text}, {"matched_text", r.matched_text}, {"cosine", r.cosine}});
  }
  return {{"rows", rows}, {"mean", table.mean}};
}

}  // namespace casegraph
