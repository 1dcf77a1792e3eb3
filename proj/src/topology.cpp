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

#include "casegraph/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "casegraph/error.hpp"

namespace casegraph {

namespace {

constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();

std::vector<std::size_t> bfs_distances(const SimpleGraph& g, std::size_t source) {
  std::vector<std::size_t> dist(g.node_count(), kUnreached);
  std::queue<std::size_t> q;
  dist[source] = 0;
  q.push(source);
  while (!q.empty()) {
    const std::size_t v = q.front();
    q.pop();
    for (std::size_t w : g.neighbors(v)) {
      if (dist[w] == kUnreached) {
        dist[w] = dist[v] + 1;
        q.push(w);
      }
    }
  }
  return dist;
}

void require_two_nodes(std::size_t n) {
  if (n < 2) throw Error(ErrorCode::kTooFewNodes, "need at least 2 nodes, got " + std::to_string(n));
}

template <typename T>
std::pair<double, double> mean_max(const std::vector<T>& values) {
  if (values.empty()) return {0.0, 0.0};
  double sum = 0, mx = values.front();
  for (double v : values) {
    sum += v;
    mx = std::max(mx, v);
  }
  return {sum / static_cast<double>(values.size()), mx};
}

// Brandes accumulation; returns raw pair dependencies summed over all
// sources (each unordered pair counted twice).
std::vector<double> brandes_raw(const SimpleGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> bc(n, 0.0);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> preds(n);
  std::vector<double> sigma(n), delta(n);
  std::vector<long long> dist(n);
  for (std::size_t s = 0; s < n; ++s) {
    stack.clear();
    for (std::size_t v = 0; v < n; ++v) preds[v].clear();
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(dist.begin(), dist.end(), -1);
    sigma[s] = 1;
    dist[s] = 0;
    std::queue<std::size_t> q;
    q.push(s);
    while (!q.empty()) {
      const std::size_t v = q.front();
      q.pop();
      stack.push_back(v);
      for (std::size_t w : g.neighbors(v)) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          q.push(w);
        }
        if (dist[w] == dist[v] + 1) {
          sigma[w] += sigma[v];
          preds[w].push_back(v);
        }
      }
    }
    std::fill(delta.begin(), delta.end(), 0.0);
    while (!stack.empty()) {
      const std::size_t w = stack.back();
      stack.pop_back();
      for (std::size_t v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) bc[w] += delta[w];
    }
  }
  return bc;
}

}  // namespace

double edge_density(const CausalGraph& graph) {
  const std::size_t n = graph.node_count();
  require_two_nodes(n);
  return static_cast<double>(graph.edge_count()) / static_cast<double>(n * (n - 1));
}

Centralities centralities(const SimpleGraph& g) {
  const std::size_t n = g.node_count();
  require_two_nodes(n);
  Centralities c;
  const double nm1 = static_cast<double>(n - 1);

  c.degree.resize(n);
  for (std::size_t v = 0; v < n; ++v) c.degree[v] = static_cast<double>(g.degree(v)) / nm1;

  c.betweenness = brandes_raw(g);
  const double scale = n > 2 ? 1.0 / (nm1 * static_cast<double>(n - 2)) : 0.0;
  for (double& b : c.betweenness) b *= scale;

  c.closeness.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    const auto dist = bfs_distances(g, v);
    std::size_t reachable = 0, total = 0;
    for (std::size_t d : dist) {
      if (d != kUnreached) {
        ++reachable;
        total += d;
      }
    }
    if (total == 0) {
      c.closeness[v] = 0.0;
      continue;
    }
    const double r1 = static_cast<double>(reachable - 1);
    c.closeness[v] = (r1 / nm1) * (r1 / static_cast<double>(total));
  }

  std::tie(c.mean_degree, c.max_degree) = mean_max(c.degree);
  std::tie(c.mean_betweenness, c.max_betweenness) = mean_max(c.betweenness);
  std::tie(c.mean_closeness, c.max_closeness) = mean_max(c.closeness);
  return c;
}

Centralities centralities(const CausalGraph& graph) { return centralities(undirected_projection(graph)); }

ClusteringStats clustering_stats(const SimpleGraph& g) {
  const std::size_t n = g.node_count();
  ClusteringStats s;
  s.local.assign(n, 0.0);
  std::size_t closed_at_node_sum = 0;  // each triangle counted at each of its 3 corners
  std::size_t triples = 0;
  for (std::size_t v = 0; v < n; ++v) {
    const auto& nbrs = g.neighbors(v);
    const std::size_t d = nbrs.size();
    if (d < 2) continue;
    std::size_t links = 0;
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i + 1; j < d; ++j) {
        if (g.has_edge(nbrs[i], nbrs[j])) ++links;
      }
    }
    s.local[v] = 2.0 * static_cast<double>(links) / static_cast<double>(d * (d - 1));
    closed_at_node_sum += links;
    triples += d * (d - 1) / 2;
  }
  s.triangle_count = closed_at_node_sum / 3;
  s.mean_local = n == 0 ? 0.0 : mean_max(s.local).first;
  s.transitivity = triples == 0 ? 0.0 : 3.0 * static_cast<double>(s.triangle_count) / static_cast<double>(triples);
  return s;
}

ClusteringStats clustering_stats(const CausalGraph& graph) {
  return clustering_stats(undirected_projection(graph));
}

PathStats path_stats(const SimpleGraph& g) {
  const std::size_t n = g.node_count();
  require_two_nodes(n);
  std::size_t pairs = 0, total = 0, diameter = 0;
  for (std::size_t v = 0; v < n; ++v) {
    const auto dist = bfs_distances(g, v);
    for (std::size_t u = 0; u < n; ++u) {
      if (u == v || dist[u] == kUnreached) continue;
      ++pairs;
      total += dist[u];
      diameter = std::max(diameter, dist[u]);
    }
  }
  if (pairs == 0) throw Error(ErrorCode::kNoEdges, "no pair of nodes is connected");
  PathStats p;
  p.diameter = diameter;
  p.mean_shortest_path = static_cast<double>(total) / static_cast<double>(pairs);
  p.fully_connected = pairs == n * (n - 1);
  return p;
}

PathStats path_stats(const CausalGraph& graph) { return path_stats(undirected_projection(graph)); }

double degree_assortativity(const SimpleGraph& g) {
  if (g.edge_count() == 0) throw Error(ErrorCode::kNoEdges, "assortativity needs at least one edge");
  // Both orientations make the two marginals identical, so one mean and one
  // variance describe x and y.
  double sum = 0, sum_sq = 0, sum_xy = 0;
  for (auto [u, v] : g.edges()) {
    const double du = static_cast<double>(g.degree(u));
    const double dv = static_cast<double>(g.degree(v));
    sum += du + dv;
    sum_sq += du * du + dv * dv;
    sum_xy += 2.0 * du * dv;
  }
  const double count = 2.0 * static_cast<double>(g.edge_count());
  const double mean = sum / count;
  const double var = sum_sq / count - mean * mean;
  if (var <= 1e-12 * std::max(1.0, mean * mean)) {
    throw Error(ErrorCode::kZeroVariance, "all edge endpoints have the same degree");
  }
  const double cov = sum_xy / count - mean * mean;
  return std::clamp(cov / var, -1.0, 1.0);
}

double degree_assortativity(const CausalGraph& graph) {
  return degree_assortativity(undirected_projection(graph));
}

bool has_directed_cycle(const CausalGraph& graph) {
  const std::size_t n = graph.node_count();
  std::vector<std::vector<std::size_t>> out(n);
  std::vector<std::size_t> indegree(n, 0);
  for (const auto& e : graph.edges()) {
    const std::size_t s = *graph.index_of(e.source), t = *graph.index_of(e.target);
    out[s].push_back(t);
    ++indegree[t];
  }
  // Kahn's algorithm: any node left over sits on or behind a cycle.
  std::vector<std::size_t> ready;
  for (std::size_t v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.push_back(v);
  }
  std::size_t removed = 0;
  while (!ready.empty()) {
    const std::size_t v = ready.back();
    ready.pop_back();
    ++removed;
    for (std::size_t w : out[v]) {
      if (--indegree[w] == 0) ready.push_back(w);
    }
  }
  return removed != n;
}

DegreeHistogram degree_distribution(const CausalGraph& graph) {
  DegreeHistogram h;
  const auto degrees = degree_sequences(graph);
  if (degrees.empty()) return h;
  std::size_t max_degree = 0;
  for (const auto& d : degrees) max_degree = std::max(max_degree, d.total);
  std::vector<std::size_t> counts(max_degree + 1, 0);
  for (const auto& d : degrees) ++counts[d.total];
  h.mass.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    h.mass[i] = static_cast<double>(counts[i]) / static_cast<double>(degrees.size());
  }
  return h;
}

double kl_divergence(const DegreeHistogram& p, const DegreeHistogram& q) {
  const std::size_t len = std::max(p.mass.size(), q.mass.size());
  const double norm = 1.0 + kKlEpsilon * static_cast<double>(len);
  double kl = 0;
  for (std::size_t i = 0; i < len; ++i) {
    const double pi = i < p.mass.size() ? p.mass[i] : 0.0;
    if (pi <= 0) continue;
    const double qi = ((i < q.mass.size() ? q.mass[i] : 0.0) + kKlEpsilon) / norm;
    kl += pi * std::log(pi / qi);
  }
  return std::max(kl, 0.0);
}

double emd_1d(const DegreeHistogram& p, const DegreeHistogram& q) {
  const std::size_t len = std::max(p.mass.size(), q.mass.size());
  double cdf_p = 0, cdf_q = 0, emd = 0;
  for (std::size_t i = 0; i < len; ++i) {
    cdf_p += i < p.mass.size() ? p.mass[i] : 0.0;
    cdf_q += i < q.mass.size() ? q.mass[i] : 0.0;
    emd += std::abs(cdf_p - cdf_q);
  }
  return emd;
}

CategoryConnectivity inter_category_connectivity(const CausalGraph& graph) {
  CategoryConnectivity c;
  auto slot = [](FactorCategory cat) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < kConnectivityCategories.size(); ++i) {
      if (kConnectivityCategories[i] == cat) return i;
    }
    return std::nullopt;
  };
  for (const auto& n : graph.nodes()) {
    if (auto i = slot(n.category)) ++c.sizes[*i];
  }
  for (const auto& e : graph.edges()) {
    auto a = slot(graph.node(e.source).category);
    auto b = slot(graph.node(e.target).category);
    if (a && b) ++c.counts[*a][*b];
  }
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) {
      const std::size_t possible = a == b ? c.sizes[a] * (c.sizes[a] == 0 ? 0 : c.sizes[a] - 1)
                                          : c.sizes[a] * c.sizes[b];
      if (possible > 0) c.density[a][b] = static_cast<double>(c.counts[a][b]) / static_cast<double>(possible);
    }
  }
  return c;
}

MetricsReport compute_metrics(const CausalGraph& graph) {
  MetricsReport r;
  const SimpleGraph simple = undirected_projection(graph);
  r.node_count = graph.node_count();
  r.edge_count = graph.edge_count();
  if (r.node_count >= 2) {
    r.edge_density = edge_density(graph);
    r.centrality = centralities(simple);
    if (simple.edge_count() > 0) r.paths = path_stats(simple);
  }
  r.clustering = clustering_stats(simple);
  if (simple.edge_count() > 0) {
    try {
      r.degree_assortativity = degree_assortativity(simple);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kZeroVariance) throw;
    }
  }
  r.cycle_present = has_directed_cycle(graph);
  r.degree_histogram = degree_distribution(graph);
  r.connectivity = inter_category_connectivity(graph);
  return r;
}

namespace {

nlohmann::json opt(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json to_json(const MetricsReport& r, const CausalGraph& graph) {
  using nlohmann::json;
  json topology = {{"node_count", r.node_count},
                   {"edge_count", r.edge_count},
                   {"edge_density", opt(r.edge_density)},
                   {"diameter", r.paths ? json(r.paths->diameter) : json(nullptr)},
                   {"mean_shortest_path", r.paths ? json(r.paths->mean_shortest_path) : json(nullptr)},
                   {"fully_connected", r.paths ? json(r.paths->fully_connected) : json(nullptr)},
                   {"degree_assortativity", opt(r.degree_assortativity)},
                   {"cycle_present", r.cycle_present}};

  json local = json::object();
  for (std::size_t i = 0; i < graph.node_count(); ++i) local[graph.nodes()[i].id] = r.clustering.local[i];
  json clustering = {{"mean_local", r.clustering.mean_local},
                     {"transitivity", r.clustering.transitivity},
                     {"triangle_count", r.clustering.triangle_count},
                     {"local", local}};

  json centrality = nullptr;
  if (r.centrality) {
    const auto& c = *r.centrality;
    json per_node = json::object();
    for (std::size_t i = 0; i < graph.node_count(); ++i) {
      per_node[graph.nodes()[i].id] = {
          {"degree", c.degree[i]}, {"betweenness", c.betweenness[i]}, {"closeness", c.closeness[i]}};
    }
    centrality = {{"mean_degree", c.mean_degree},
                  {"max_degree", c.max_degree},
                  {"mean_betweenness", c.mean_betweenness},
                  {"max_betweenness", c.max_betweenness},
                  {"mean_closeness", c.mean_closeness},
                  {"max_closeness", c.max_closeness},
                  {"per_node", per_node}};
  }

  json categories = json::array();
  for (FactorCategory cat : kConnectivityCategories) categories.push_back(std::string(to_string(cat)));
  json counts = json::array(), density = json::array();
  for (std::size_t a = 0; a < 4; ++a) {
    json crow = json::array(), drow = json::array();
    for (std::size_t b = 0; b < 4; ++b) {
      crow.push_back(r.connectivity.counts[a][b]);
      drow.push_back(opt(r.connectivity.density[a][b]));
    }
    counts.push_back(crow);
    density.push_back(drow);
  }

  return {{"session_id", graph.session_id()},
          {"topology", topology},
          {"clustering", clustering},
          {"centrality", centrality},
          {"degree_histogram", r.degree_histogram.mass},
          {"category_connectivity",
           {{"categories", categories}, {"sizes", r.connectivity.sizes}, {"counts", counts}, {"density", density}}},
          {"metadata",
           {{"projection", "centrality, clustering, paths and assortativity use the undirected projection; "
                           "density and category connectivity use the directed graph"},
            {"closeness", "Wasserman-Faust: ((r-1)/(n-1)) * ((r-1)/sum of distances), r = reachable nodes incl. self"},
            {"betweenness_normalization", "2/((n-1)(n-2)), 0 when n = 2"},
            {"paths", "diameter and mean over reachable ordered pairs only"},
            {"degree_histogram", "total degree (in + out) on the directed graph"},
            {"kl_epsilon", kKlEpsilon},
            {"kl_log_base", "e"}}}};
}

}  // namespace casegraph
