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

// Graph statistics. Density and category connectivity use the directed
// graph; centrality, clustering, paths and assortativity use the undirected
// projection.

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "casegraph/graph.hpp"

namespace casegraph {

// Smoothing added to every bin of the second histogram before KL.
inline constexpr double kKlEpsilon = 1e-10;

// m / (n (n - 1)). Throws TooFewNodes when n < 2.
double edge_density(const CausalGraph& graph);

struct Centralities {
  std::vector<double> degree;       // deg / (n - 1)
  std::vector<double> betweenness;  // normalized by 2 / ((n - 1)(n - 2)); 0 when n = 2
  std::vector<double> closeness;    // Wasserman-Faust: ((r-1)/(n-1)) * ((r-1)/sum d)
  double mean_degree = 0, max_degree = 0;
  double mean_betweenness = 0, max_betweenness = 0;
  double mean_closeness = 0, max_closeness = 0;
};

// Throws TooFewNodes when n < 2.
Centralities centralities(const SimpleGraph& graph);
Centralities centralities(const CausalGraph& graph);

struct ClusteringStats {
  std::vector<double> local;  // 0 for degree < 2
  double mean_local = 0;
  double transitivity = 0;  // 3 * triangles / connected triples, 0 without triples
  std::size_t triangle_count = 0;
};

ClusteringStats clustering_stats(const SimpleGraph& graph);
ClusteringStats clustering_stats(const CausalGraph& graph);

struct PathStats {
  std::size_t diameter = 0;
  double mean_shortest_path = 0;  // over reachable ordered pairs
  bool fully_connected = false;
};

// Throws TooFewNodes (n < 2) or NoEdges (no reachable pair).
PathStats path_stats(const SimpleGraph& graph);
PathStats path_stats(const CausalGraph& graph);

// Pearson correlation of endpoint degrees over both orientations of every
// undirected edge. Throws NoEdges or ZeroVariance.
double degree_assortativity(const SimpleGraph& graph);
double degree_assortativity(const CausalGraph& graph);

// Directed cycle (length >= 2) anywhere in the graph.
bool has_directed_cycle(const CausalGraph& graph);

// Probability mass over total degree 0..max_degree.
struct DegreeHistogram {
  std::vector<double> mass;
};

DegreeHistogram degree_distribution(const CausalGraph& graph);

// Sum p ln(p / q') with q' = (q + eps) / (1 + eps * L) over the union support
// of length L; 0 ln 0 = 0.
double kl_divergence(const DegreeHistogram& p, const DegreeHistogram& q);

// Sum of |CDF_p - CDF_q| with unit spacing between degree values.
double emd_1d(const DegreeHistogram& p, const DegreeHistogram& q);

inline constexpr std::array<FactorCategory, 4> kConnectivityCategories = {
    FactorCategory::kPresenting, FactorCategory::kPredisposing, FactorCategory::kPrecipitating,
    FactorCategory::kPerpetuating};

// counts[a][b]: edges from category a to category b, indexed like
// kConnectivityCategories. density is nullopt where the normalizer
// (|A||B|, or |A|(|A|-1) on the diagonal) is zero.
struct CategoryConnectivity {
  std::array<std::array<std::size_t, 4>, 4> counts{};
  std::array<std::array<std::optional<double>, 4>, 4> density{};
  std::array<std::size_t, 4> sizes{};
};

CategoryConnectivity inter_category_connectivity(const CausalGraph& graph);

// Everything above for one graph; parts whose preconditions fail are left
// empty instead of throwing.
struct MetricsReport {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  std::optional<double> edge_density;
  std::optional<Centralities> centrality;
  ClusteringStats clustering;
  std::optional<PathStats> paths;
  std::optional<double> degree_assortativity;
  bool cycle_present = false;
  DegreeHistogram degree_histogram;
  CategoryConnectivity connectivity;
};

MetricsReport compute_metrics(const CausalGraph& graph);

// Grouped as topology / clustering / centrality, plus distributions,
// category connectivity and a metadata block naming the conventions used.
nlohmann::json to_json(const MetricsReport& report, const CausalGraph& graph);

}  // namespace casegraph
