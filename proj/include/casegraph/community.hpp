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

// Community detection on the undirected projection. Every algorithm is a
// pure function of (graph, seed).

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "casegraph/graph.hpp"

namespace casegraph {

inline constexpr std::uint64_t kDefaultSeed = 42;

class Partition {
 public:
  Partition() = default;

  // Relabels `labels` so communities are numbered 0.. in order of first
  // appearance along `node_ids`. Throws PartitionMismatch on a size mismatch.
  static Partition from_labels(std::vector<std::string> node_ids, const std::vector<std::size_t>& labels);
  static Partition singletons(std::vector<std::string> node_ids);

  const std::vector<std::string>& node_ids() const { return node_ids_; }
  const std::vector<std::size_t>& membership() const { return membership_; }
  std::size_t community_count() const { return community_count_; }
  std::size_t community_of(std::string_view id) const;  // throws UnknownNode
  std::vector<std::vector<std::size_t>> communities() const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<std::string> node_ids_;
  std::vector<std::size_t> membership_;
  std::size_t community_count_ = 0;
};

// Sum over communities of e_c/m - resolution * (d_c / 2m)^2.
// Throws NoEdges or PartitionMismatch.
double modularity(const SimpleGraph& graph, const Partition& partition, double resolution = 1.0);

struct GirvanNewmanResult {
  Partition best;
  // Component partition before any removal, then after every removal.
  std::vector<Partition> dendrogram;
  // Modularity on the original graph per dendrogram entry; empty when the
  // graph has no edges.
  std::vector<double> modularity;
  std::size_t best_index = 0;
};

GirvanNewmanResult girvan_newman_dendrogram(const SimpleGraph& graph);
Partition girvan_newman(const SimpleGraph& graph);
Partition girvan_newman(const CausalGraph& graph);

Partition leiden(const SimpleGraph& graph, double resolution = 1.0, std::uint64_t seed = kDefaultSeed);
Partition leiden(const CausalGraph& graph, double resolution = 1.0, std::uint64_t seed = kDefaultSeed);

// Two-level map equation in bits, flow proportional to degree.
// Throws NoEdges or PartitionMismatch.
double map_equation(const SimpleGraph& graph, const Partition& partition);

// Throws NoEdges.
Partition infomap_two_level(const SimpleGraph& graph, std::uint64_t seed = kDefaultSeed);
Partition infomap_two_level(const CausalGraph& graph, std::uint64_t seed = kDefaultSeed);

inline constexpr int kLabelPropagationMaxSweeps = 100;

Partition label_propagation(const SimpleGraph& graph, std::uint64_t seed = kDefaultSeed);
Partition label_propagation(const CausalGraph& graph, std::uint64_t seed = kDefaultSeed);

struct CommunityAlignment {
  std::size_t size = 0;
  FactorCategory majority = FactorCategory::kPresenting;
  double majority_fraction = 0;
};

struct AlignmentReport {
  std::vector<CommunityAlignment> communities;
  double purity = 0;
};

// Majority ties resolve in category enum order. Throws PartitionMismatch or
// EmptyGraph.
AlignmentReport category_alignment(const CausalGraph& graph, const Partition& partition);

enum class CommunityAlgorithm { kLeiden, kGirvanNewman, kInfomap, kLabelPropagation };

std::string_view to_string(CommunityAlgorithm algorithm);
std::optional<CommunityAlgorithm> parse_algorithm(std::string_view name);

// Dispatches to the algorithm; `resolution` only affects Leiden.
Partition detect_communities(const CausalGraph& graph, CommunityAlgorithm algorithm, double resolution,
                             std::uint64_t seed);

// {algorithm, seed, resolution, assignments, community_count, quality,
// alignment}. seed is null for Girvan-Newman, resolution is null outside
// Leiden, quality values are null when undefined.
nlohmann::json partition_document(const CausalGraph& graph, const Partition& partition,
                                  CommunityAlgorithm algorithm, double resolution, std::uint64_t seed);

}  // namespace casegraph
