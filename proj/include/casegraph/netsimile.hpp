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

// NetSimile structural signatures.
//
// Seven local features are computed per node of the undirected projection
// and each feature column is summarised by five moments, giving a
// 35-dimensional signature laid out feature-major:
//
//   [degree: median, mean, std, skewness, kurtosis,
//    clustering: ..., neighbor degree: ..., neighbor clustering: ...,
//    egonet edges: ..., egonet outgoing edges: ..., egonet neighbors: ...]
//
// Moments are population moments; kurtosis is excess kurtosis; skewness and
// kurtosis of a constant column are 0. Two signatures are compared with the
// Canberra distance, and similarity is 1 - distance / 35.

#pragma once

#include <array>
#include <span>
#include <string>

#include <nlohmann/json.hpp>

#include "casegraph/graph.hpp"

namespace casegraph {

inline constexpr std::size_t kNodeFeatureCount = 7;
inline constexpr std::size_t kAggregateCount = 5;
inline constexpr std::size_t kSignatureLength = kNodeFeatureCount * kAggregateCount;

struct NodeFeatureVector {
  double degree = 0;
  double clustering = 0;
  double mean_neighbor_degree = 0;
  double mean_neighbor_clustering = 0;
  double egonet_edges = 0;
  double egonet_outgoing_edges = 0;
  double egonet_neighbors = 0;

  std::array<double, kNodeFeatureCount> as_array() const {
    return {degree, clustering, mean_neighbor_degree, mean_neighbor_clustering,
            egonet_edges, egonet_outgoing_edges, egonet_neighbors};
  }
  friend bool operator==(const NodeFeatureVector&, const NodeFeatureVector&) = default;
};

using NetSimileSignature = std::array<double, kSignatureLength>;

// Names matching the signature layout, e.g. "degree.median".
const std::array<std::string, kSignatureLength>& signature_labels();

NodeFeatureVector node_features(const SimpleGraph& graph, std::size_t node);
// Throws UnknownNode.
NodeFeatureVector node_features(const SimpleGraph& graph, std::string_view node_id);

// Throws EmptyGraph.
NetSimileSignature graph_signature(const SimpleGraph& graph);

// Throws LengthMismatch.
double canberra_distance(std::span<const double> x, std::span<const double> y);

// Throws EmptyGraph if either graph has no nodes.
double netsimile_similarity(const CausalGraph& a, const CausalGraph& b);
double netsimile_similarity(const SimpleGraph& a, const SimpleGraph& b);

nlohmann::json signature_to_json(const NetSimileSignature& signature);

}  // namespace casegraph
