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

// Shared fixtures and brute-force oracles for the unit and acceptance tests.
// The oracles deliberately avoid the library's algorithms: distances come
// from Floyd-Warshall, shortest-path counts from adjacency-matrix powers and
// triangles from triple enumeration.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "casegraph/graph.hpp"
#include "casegraph/graph_io.hpp"

namespace casegraph::testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(CASEGRAPH_TEST_DATA_DIR) / name;
}

inline std::string read_data(const std::string& name) { return read_file(data_path(name)); }

// Node ids "n0".."n{k}" padded so lexicographic order equals index order.
inline std::string node_id(std::size_t i) {
  std::string s = std::to_string(i);
  return "n" + std::string(s.size() < 3 ? 3 - s.size() : 0, '0') + s;
}

inline FactorNode make_node(std::string id, FactorCategory category = FactorCategory::kPresenting,
                            std::string label = "") {
  FactorNode n;
  n.label = label.empty() ? id : std::move(label);
  n.id = std::move(id);
  n.category = category;
  return n;
}

inline CausalEdge make_edge(std::string source, std::string target) {
  CausalEdge e;
  e.source = std::move(source);
  e.target = std::move(target);
  return e;
}

// Directed graph over node_id(0..n-1) with the given arcs; categories cycle
// through the four generated ones.
inline CausalGraph directed_graph(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& arcs,
                                  std::string session = "test") {
  std::vector<FactorNode> nodes;
  for (std::size_t i = 0; i < n; ++i) nodes.push_back(make_node(node_id(i), kAllCategories[i % 4]));
  std::vector<CausalEdge> edges;
  for (auto [u, v] : arcs) edges.push_back(make_edge(node_id(u), node_id(v)));
  return build_graph(std::move(session), std::move(nodes), std::move(edges), GraphOrigin::kHuman);
}

// Undirected edges given as pairs; each becomes one arc u -> v.
inline CausalGraph undirected_as_directed(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& pairs) {
  return directed_graph(n, pairs);
}

inline CausalGraph random_directed_graph(std::mt19937_64& rng, std::size_t min_n, std::size_t max_n) {
  std::uniform_int_distribution<std::size_t> size(min_n, max_n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n = size(rng);
  const double p = unit(rng) * 0.6;
  std::vector<std::pair<std::size_t, std::size_t>> arcs;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (u != v && unit(rng) < p) arcs.emplace_back(u, v);
    }
  }
  return directed_graph(n, arcs);
}

// Same graph with node ids permuted; labels follow their nodes.
inline CausalGraph relabeled(const CausalGraph& g, std::mt19937_64& rng) {
  const std::size_t n = g.node_count();
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  auto new_id = [&](const std::string& id) { return "x" + node_id(perm[*g.index_of(id)]); };
  std::vector<FactorNode> nodes;
  for (const auto& v : g.nodes()) {
    FactorNode c = v;
    c.id = new_id(v.id);
    nodes.push_back(c);
  }
  std::vector<CausalEdge> edges;
  for (const auto& e : g.edges()) edges.push_back(make_edge(new_id(e.source), new_id(e.target)));
  return build_graph(g.session_id(), nodes, edges, g.origin(), g.annotator_id());
}

// Adjacency matrix of the undirected projection, built straight from arcs.
inline std::vector<std::vector<int>> undirected_adjacency(const CausalGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<std::vector<int>> a(n, std::vector<int>(n, 0));
  for (const auto& e : g.edges()) {
    const std::size_t u = *g.index_of(e.source);
    const std::size_t v = *g.index_of(e.target);
    a[u][v] = a[v][u] = 1;
  }
  return a;
}

inline constexpr int kInf = std::numeric_limits<int>::max() / 4;

inline std::vector<std::vector<int>> floyd_warshall(const std::vector<std::vector<int>>& a) {
  const std::size_t n = a.size();
  std::vector<std::vector<int>> d(n, std::vector<int>(n, kInf));
  for (std::size_t i = 0; i < n; ++i) {
    d[i][i] = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (a[i][j]) d[i][j] = 1;
    }
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
    }
  }
  return d;
}

// walks[l][i][j]: number of walks of length l; a walk of shortest length is
// a shortest path, so this counts shortest paths.
inline std::vector<std::vector<std::vector<double>>> walk_counts(const std::vector<std::vector<int>>& a) {
  const std::size_t n = a.size();
  std::vector<std::vector<std::vector<double>>> w(n + 1, std::vector<std::vector<double>>(n, std::vector<double>(n, 0)));
  for (std::size_t i = 0; i < n; ++i) w[0][i][i] = 1;
  for (std::size_t l = 1; l <= n; ++l) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0;
        for (std::size_t k = 0; k < n; ++k) s += w[l - 1][i][k] * a[k][j];
        w[l][i][j] = s;
      }
    }
  }
  return w;
}

struct BruteMetrics {
  double density = 0;
  std::vector<double> degree_c, betweenness, closeness, local;
  std::size_t triangles = 0;
  double transitivity = 0;
  bool has_path = false;
  int diameter = 0;
  double mean_path = 0;
  bool fully_connected = false;
  bool assortativity_defined = false;
  double assortativity = 0;
};

inline BruteMetrics brute_metrics(const CausalGraph& g) {
  BruteMetrics r;
  const std::size_t n = g.node_count();
  const auto a = undirected_adjacency(g);
  const auto d = floyd_warshall(a);
  const auto w = walk_counts(a);
  std::vector<int> deg(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) deg[i] += a[i][j];
  }
  r.density = n >= 2 ? static_cast<double>(g.edge_count()) / static_cast<double>(n * (n - 1)) : 0;

  r.degree_c.assign(n, 0);
  r.betweenness.assign(n, 0);
  r.closeness.assign(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    if (n >= 2) r.degree_c[v] = deg[v] / static_cast<double>(n - 1);
    double pair_sum = 0;
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t t = s + 1; t < n; ++t) {
        if (s == v || t == v || d[s][t] >= kInf) continue;
        if (d[s][v] + d[v][t] != d[s][t]) continue;
        pair_sum += w[d[s][v]][s][v] * w[d[v][t]][v][t] / w[d[s][t]][s][t];
      }
    }
    if (n > 2) r.betweenness[v] = pair_sum * 2.0 / static_cast<double>((n - 1) * (n - 2));
    int reach = 0;
    double dist = 0;
    for (std::size_t u = 0; u < n; ++u) {
      if (u != v && d[v][u] < kInf) {
        ++reach;
        dist += d[v][u];
      }
    }
    if (reach > 0 && n >= 2) r.closeness[v] = (reach / static_cast<double>(n - 1)) * (reach / dist);
  }

  r.local.assign(n, 0);
  std::size_t triples = 0;
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t links = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (a[v][i] && a[v][j] && a[i][j]) ++links;
      }
    }
    if (deg[v] >= 2) r.local[v] = 2.0 * links / (deg[v] * (deg[v] - 1.0));
    triples += static_cast<std::size_t>(deg[v] * (deg[v] - 1) / 2);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        if (a[i][j] && a[j][k] && a[i][k]) ++r.triangles;
      }
    }
  }
  r.transitivity = triples ? 3.0 * r.triangles / static_cast<double>(triples) : 0;

  std::size_t finite = 0;
  double total = 0;
  r.fully_connected = true;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      if (d[i][j] >= kInf) {
        r.fully_connected = false;
        continue;
      }
      ++finite;
      total += d[i][j];
      r.diameter = std::max(r.diameter, d[i][j]);
    }
  }
  r.has_path = finite > 0;
  if (finite) r.mean_path = total / static_cast<double>(finite);

  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (a[i][j]) {
        xs.push_back(deg[i]);
        ys.push_back(deg[j]);
      }
    }
  }
  if (!xs.empty()) {
    const double k = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxy += xs[i] * ys[i];
      sxx += xs[i] * xs[i];
      syy += ys[i] * ys[i];
    }
    const double cov = sxy / k - (sx / k) * (sy / k);
    const double vx = sxx / k - (sx / k) * (sx / k);
    const double vy = syy / k - (sy / k) * (sy / k);
    if (vx > 1e-12 && vy > 1e-12) {
      r.assortativity_defined = true;
      r.assortativity = cov / std::sqrt(vx * vy);
    }
  }
  return r;
}

// k disjoint cliques with the given sizes over one node set.
inline CausalGraph disjoint_cliques(const std::vector<std::size_t>& sizes,
                                    std::vector<std::vector<std::size_t>>* members = nullptr) {
  std::vector<std::pair<std::size_t, std::size_t>> arcs;
  std::size_t base = 0;
  for (std::size_t s : sizes) {
    std::vector<std::size_t> group;
    for (std::size_t i = 0; i < s; ++i) {
      group.push_back(base + i);
      for (std::size_t j = i + 1; j < s; ++j) arcs.emplace_back(base + i, base + j);
    }
    if (members) members->push_back(group);
    base += s;
  }
  return directed_graph(base, arcs);
}

// Fleiss' kappa computed by expanding each subject into its rater labels and
// counting agreeing ordered rater pairs.
inline double brute_kappa(const std::vector<std::vector<int>>& counts) {
  const std::size_t subjects = counts.size();
  const std::size_t k = counts.front().size();
  double agree_sum = 0;
  std::vector<double> label_total(k, 0);
  double all_labels = 0;
  for (const auto& row : counts) {
    std::vector<std::size_t> labels;
    for (std::size_t j = 0; j < k; ++j) {
      for (int c = 0; c < row[j]; ++c) labels.push_back(j);
    }
    std::size_t agreeing = 0, pairs = 0;
    for (std::size_t x = 0; x < labels.size(); ++x) {
      for (std::size_t y = 0; y < labels.size(); ++y) {
        if (x == y) continue;
        ++pairs;
        if (labels[x] == labels[y]) ++agreeing;
      }
      label_total[labels[x]] += 1;
      all_labels += 1;
    }
    agree_sum += static_cast<double>(agreeing) / static_cast<double>(pairs);
  }
  const double observed = agree_sum / static_cast<double>(subjects);
  double expected = 0;
  for (double t : label_total) expected += (t / all_labels) * (t / all_labels);
  return (observed - expected) / (1 - expected);
}

}  // namespace casegraph::testing
