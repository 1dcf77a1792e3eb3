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

#include "casegraph/netsimile.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "casegraph/error.hpp"

namespace casegraph {

namespace {

double local_clustering(const SimpleGraph& g, std::size_t v) {
  const auto& nbrs = g.neighbors(v);
  const std::size_t d = nbrs.size();
  if (d < 2) return 0.0;
  std::size_t links = 0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      if (g.has_edge(nbrs[i], nbrs[j])) ++links;
    }
  }
  return 2.0 * static_cast<double>(links) / static_cast<double>(d * (d - 1));
}

// Median, mean, std, skewness, excess kurtosis (population moments).
std::array<double, kAggregateCount> aggregate(std::vector<double> column) {
  const auto n = static_cast<double>(column.size());
  std::sort(column.begin(), column.end());
  const std::size_t mid = column.size() / 2;
  const double median = column.size() % 2 == 1 ? column[mid] : 0.5 * (column[mid - 1] + column[mid]);

  double mean = 0;
  for (double x : column) mean += x;
  mean /= n;
  double m2 = 0, m3 = 0, m4 = 0;
  for (double x : column) {
    const double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  // Relative threshold so rounding noise on a constant column reads as 0.
  const double scale = std::max(1.0, mean * mean);
  if (m2 <= 1e-24 * scale) return {median, mean, 0.0, 0.0, 0.0};
  return {median, mean, std::sqrt(m2), m3 / std::pow(m2, 1.5), m4 / (m2 * m2) - 3.0};
}

}  // namespace

const std::array<std::string, kSignatureLength>& signature_labels() {
  static const std::array<std::string, kSignatureLength> labels = [] {
    const char* features[kNodeFeatureCount] = {"degree",       "clustering",
                                               "neighbor_degree", "neighbor_clustering",
                                               "egonet_edges", "egonet_outgoing_edges",
                                               "egonet_neighbors"};
    const char* aggs[kAggregateCount] = {"median", "mean", "std", "skewness", "kurtosis"};
    std::array<std::string, kSignatureLength> out;
    for (std::size_t f = 0; f < kNodeFeatureCount; ++f) {
      for (std::size_t a = 0; a < kAggregateCount; ++a) {
        out[f * kAggregateCount + a] = std::string(features[f]) + "." + aggs[a];
      }
    }
    return out;
  }();
  return labels;
}

NodeFeatureVector node_features(const SimpleGraph& g, std::size_t v) {
  if (v >= g.node_count()) throw Error(ErrorCode::kUnknownNode, "node index out of range");
  NodeFeatureVector f;
  const auto& nbrs = g.neighbors(v);
  f.degree = static_cast<double>(nbrs.size());
  f.clustering = local_clustering(g, v);
  if (!nbrs.empty()) {
    double deg_sum = 0, cc_sum = 0;
    std::vector<double> cc;
    for (std::size_t u : nbrs) {
      deg_sum += static_cast<double>(g.degree(u));
      cc.push_back(local_clustering(g, u));
    }
    // Summing in value order keeps the feature bit-identical under relabeling.
    std::sort(cc.begin(), cc.end());
    for (double x : cc) cc_sum += x;
    f.mean_neighbor_degree = deg_sum / f.degree;
    f.mean_neighbor_clustering = cc_sum / f.degree;
  }

  std::vector<char> in_ego(g.node_count(), 0);
  in_ego[v] = 1;
  for (std::size_t u : nbrs) in_ego[u] = 1;
  std::size_t internal = 0, outgoing = 0;
  std::vector<char> outside_neighbor(g.node_count(), 0);
  for (auto [a, b] : g.edges()) {
    if (in_ego[a] && in_ego[b]) {
      ++internal;
    } else if (in_ego[a] || in_ego[b]) {
      ++outgoing;
      outside_neighbor[in_ego[a] ? b : a] = 1;
    }
  }
  f.egonet_edges = static_cast<double>(internal);
  f.egonet_outgoing_edges = static_cast<double>(outgoing);
  f.egonet_neighbors = static_cast<double>(std::count(outside_neighbor.begin(), outside_neighbor.end(), 1));
  return f;
}

NodeFeatureVector node_features(const SimpleGraph& g, std::string_view node_id) {
  auto idx = g.index_of(node_id);
  if (!idx) throw Error(ErrorCode::kUnknownNode, "no node '" + std::string(node_id) + "'");
  return node_features(g, *idx);
}

NetSimileSignature graph_signature(const SimpleGraph& g) {
  if (g.node_count() == 0) throw Error(ErrorCode::kEmptyGraph, "signature of an empty graph");
  std::array<std::vector<double>, kNodeFeatureCount> columns;
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    const auto row = node_features(g, v).as_array();
    for (std::size_t f = 0; f < kNodeFeatureCount; ++f) columns[f].push_back(row[f]);
  }
  NetSimileSignature sig{};
  for (std::size_t f = 0; f < kNodeFeatureCount; ++f) {
    const auto agg = aggregate(std::move(columns[f]));
    std::copy(agg.begin(), agg.end(), sig.begin() + static_cast<std::ptrdiff_t>(f * kAggregateCount));
  }
  return sig;
}

double canberra_distance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(ErrorCode::kLengthMismatch,
                std::to_string(x.size()) + " vs " + std::to_string(y.size()));
  }
  double d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double denom = std::abs(x[i]) + std::abs(y[i]);
    if (denom > 0) d += std::abs(x[i] - y[i]) / denom;
  }
  return d;
}

double netsimile_similarity(const SimpleGraph& a, const SimpleGraph& b) {
  const double d = canberra_distance(graph_signature(a), graph_signature(b));
  return 1.0 - d / static_cast<double>(kSignatureLength);
}

double netsimile_similarity(const CausalGraph& a, const CausalGraph& b) {
  return netsimile_similarity(undirected_projection(a), undirected_projection(b));
}

nlohmann::json signature_to_json(const NetSimileSignature& signature) {
  nlohmann::json values = nlohmann::json::array();
  for (double v : signature) values.push_back(v);
  nlohmann::json labels = nlohmann::json::array();
  for (const auto& l : signature_labels()) labels.push_back(l);
  return {{"labels", labels}, {"values", values}};
}

}  // namespace casegraph
