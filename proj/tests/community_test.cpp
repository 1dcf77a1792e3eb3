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

#include <algorithm>
#include <queue>
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "casegraph/community.hpp"
#include "expect_error.hpp"
#include "test_support.hpp"

namespace casegraph {
namespace {

using testing::directed_graph;
using testing::make_edge;
using testing::make_node;

std::vector<std::string> ids(const CausalGraph& g) {
  std::vector<std::string> out;
  for (const auto& n : g.nodes()) out.push_back(n.id);
  return out;
}

Partition expected_partition(const CausalGraph& g, const std::vector<std::vector<std::size_t>>& groups) {
  std::vector<std::size_t> labels(g.node_count());
  for (std::size_t c = 0; c < groups.size(); ++c) {
    for (std::size_t v : groups[c]) labels[v] = c;
  }
  return Partition::from_labels(ids(g), labels);
}

// Two triangles {0,1,2} and {3,4,5} joined by the bridge 2-3.
CausalGraph bridged_triangles() { return directed_graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}}); }

// Four 4-cliques in a ring, consecutive cliques joined by one edge.
CausalGraph ring_of_cliques(std::vector<std::vector<std::size_t>>* groups) {
  std::vector<std::pair<std::size_t, std::size_t>> arcs;
  for (std::size_t c = 0; c < 4; ++c) {
    std::vector<std::size_t> g;
    for (std::size_t i = 0; i < 4; ++i) {
      g.push_back(4 * c + i);
      for (std::size_t j = i + 1; j < 4; ++j) arcs.emplace_back(4 * c + i, 4 * c + j);
    }
    groups->push_back(g);
    arcs.emplace_back(4 * c + 3, (4 * c + 4) % 16);
  }
  return directed_graph(16, arcs);
}

bool communities_connected(const SimpleGraph& g, const Partition& p) {
  for (const auto& members : p.communities()) {
    std::set<std::size_t> in(members.begin(), members.end()), seen = {members.front()};
    std::queue<std::size_t> q;
    q.push(members.front());
    while (!q.empty()) {
      std::size_t v = q.front();
      q.pop();
      for (std::size_t u : g.neighbors(v)) {
        if (in.count(u) && seen.insert(u).second) q.push(u);
      }
    }
    if (seen.size() != members.size()) return false;
  }
  return true;
}

void expect_valid(const Partition& p, const CausalGraph& g) {
  ASSERT_EQ(p.membership().size(), g.node_count());
  EXPECT_EQ(p.node_ids(), ids(g));
  std::set<std::size_t> used(p.membership().begin(), p.membership().end());
  EXPECT_EQ(used.size(), p.community_count());
  if (!used.empty()) EXPECT_EQ(*used.rbegin() + 1, p.community_count());
  // Numbered by first appearance.
  std::size_t next = 0;
  for (std::size_t c : p.membership()) {
    EXPECT_LE(c, next);
    if (c == next) ++next;
  }
}

TEST(Partition, FromLabelsNormalizes) {
  Partition p = Partition::from_labels({"a", "b", "c"}, {7, 3, 7});
  EXPECT_EQ(p.membership(), (std::vector<std::size_t>{0, 1, 0}));
  EXPECT_EQ(p.community_count(), 2u);
  EXPECT_EQ(p.community_of("b"), 1u);
  EXPECT_ERROR_CODE(p.community_of("z"), ErrorCode::kUnknownNode);
  EXPECT_ERROR_CODE(Partition::from_labels({"a"}, {0, 1}), ErrorCode::kPartitionMismatch);
}

TEST(Modularity, Examples) {
  SimpleGraph tri2 = make_simple_graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  Partition one = Partition::from_labels(tri2.ids(), {0, 0, 0, 0, 0, 0});
  EXPECT_EQ(modularity(tri2, one), 0.0);
  EXPECT_DOUBLE_EQ(modularity(tri2, Partition::from_labels(tri2.ids(), {0, 0, 0, 1, 1, 1})), 0.5);
  SimpleGraph k3 = make_simple_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  EXPECT_DOUBLE_EQ(modularity(k3, Partition::singletons(k3.ids())), -1.0 / 3.0);  // networkx oracle
  EXPECT_ERROR_CODE(modularity(make_simple_graph(2, {}), Partition::singletons({"v000", "v001"})), ErrorCode::kNoEdges);
  EXPECT_ERROR_CODE(modularity(k3, Partition::singletons({"x"})), ErrorCode::kPartitionMismatch);
}

TEST(GirvanNewman, BridgedTriangles) {
  CausalGraph g = bridged_triangles();
  GirvanNewmanResult r = girvan_newman_dendrogram(undirected_projection(g));
  EXPECT_EQ(r.best, expected_partition(g, {{0, 1, 2}, {3, 4, 5}}));
  EXPECT_NEAR(r.modularity[r.best_index], 0.35714285714285715, 1e-12);  // networkx oracle
  EXPECT_EQ(r.dendrogram.size(), 8u);  // before any removal, then one entry per removed edge
}

TEST(GirvanNewman, CliqueAndEdgeless) {
  CausalGraph k5 = testing::disjoint_cliques({5});
  EXPECT_EQ(girvan_newman(k5).community_count(), 1u);
  CausalGraph empty = directed_graph(3, {});
  EXPECT_EQ(girvan_newman(empty), Partition::singletons(ids(empty)));
}

TEST(GirvanNewman, BestPartitionMaximizesRecordedModularity) {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 40; ++trial) {
    CausalGraph g = testing::random_directed_graph(rng, 2, 10);
    SimpleGraph s = undirected_projection(g);
    GirvanNewmanResult r = girvan_newman_dendrogram(s);
    if (s.edge_count() == 0) continue;
    ASSERT_EQ(r.modularity.size(), r.dendrogram.size());
    EXPECT_EQ(r.dendrogram.size(), s.edge_count() + 1);
    for (std::size_t i = 0; i < r.dendrogram.size(); ++i) {
      const double q = modularity(s, r.dendrogram[i]);
      EXPECT_NEAR(q, r.modularity[i], 1e-12);
      EXPECT_LE(q, r.modularity[r.best_index] + 1e-12);
    }
    EXPECT_EQ(r.best, r.dendrogram[r.best_index]);
  }
}

TEST(Leiden, PlantedAndTrivialCases) {
  std::vector<std::vector<std::size_t>> groups;
  CausalGraph two = testing::disjoint_cliques({4, 4}, &groups);
  for (std::uint64_t seed = 0; seed < 10; ++seed) EXPECT_EQ(leiden(two, 1.0, seed), expected_partition(two, groups));
  CausalGraph single = directed_graph(1, {});
  EXPECT_EQ(leiden(single).community_count(), 1u);
}

TEST(Leiden, RingOfCliquesBeatsOrMatchesGirvanNewman) {
  std::vector<std::vector<std::size_t>> groups;
  CausalGraph ring = ring_of_cliques(&groups);
  SimpleGraph s = undirected_projection(ring);
  for (std::uint64_t seed : {1u, 2u, 3u, 42u}) {
    Partition p = leiden(ring, 1.0, seed);
    EXPECT_EQ(p, expected_partition(ring, groups));
    EXPECT_GE(modularity(s, p) + 1e-12, modularity(s, girvan_newman(ring)));
  }
}

TEST(Leiden, CommunitiesAreConnectedAndDeterministic) {
  std::mt19937_64 rng(66);
  for (int trial = 0; trial < 100; ++trial) {
    CausalGraph g = testing::random_directed_graph(rng, 1, 10);
    const std::uint64_t seed = rng();
    Partition p = leiden(g, 1.0, seed);
    expect_valid(p, g);
    EXPECT_TRUE(communities_connected(undirected_projection(g), p));
    EXPECT_EQ(p, leiden(g, 1.0, seed));
    if (g.edge_count() > 0) {
      EXPECT_GE(modularity(undirected_projection(g), p), -1e-12);
    }
  }
}

TEST(Leiden, ResolutionControlsGranularity) {
  std::vector<std::vector<std::size_t>> groups;
  CausalGraph ring = ring_of_cliques(&groups);
  EXPECT_EQ(leiden(ring, 0.01, 42).community_count(), 1u);
  EXPECT_GE(leiden(ring, 5.0, 42).community_count(), 4u);
}

TEST(Infomap, Examples) {
  std::vector<std::vector<std::size_t>> groups;
  CausalGraph tri2 = testing::disjoint_cliques({3, 3}, &groups);
  EXPECT_EQ(infomap_two_level(tri2), expected_partition(tri2, groups));
  EXPECT_EQ(infomap_two_level(testing::disjoint_cliques({5})).community_count(), 1u);
  EXPECT_ERROR_CODE(infomap_two_level(directed_graph(3, {})), ErrorCode::kNoEdges);

  CausalGraph bridged = directed_graph(10, {{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}, {2, 3}, {2, 4}, {3, 4},
                                            {5, 6}, {5, 7}, {5, 8}, {5, 9}, {6, 7}, {6, 8}, {6, 9}, {7, 8}, {7, 9}, {8, 9},
                                            {4, 5}});
  SimpleGraph s = undirected_projection(bridged);
  Partition found = infomap_two_level(bridged);
  Partition one = Partition::from_labels(s.ids(), std::vector<std::size_t>(10, 0));
  EXPECT_LE(map_equation(s, found), map_equation(s, one) + 1e-12);
  EXPECT_EQ(found.community_count(), 2u);
}

TEST(Infomap, MapEquationHandValues) {
  // One module: codelength is the entropy of the degree-proportional visit rates.
  SimpleGraph k3 = make_simple_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  EXPECT_NEAR(map_equation(k3, Partition::from_labels(k3.ids(), {0, 0, 0})), std::log2(3.0), 1e-12);
  // Two disjoint triangles split in two: no exits, each module log2(3).
  SimpleGraph tri2 = make_simple_graph(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  EXPECT_NEAR(map_equation(tri2, Partition::from_labels(tri2.ids(), {0, 0, 0, 1, 1, 1})), std::log2(3.0), 1e-12);
}

TEST(LabelPropagation, Examples) {
  std::vector<std::vector<std::size_t>> groups;
  CausalGraph two = testing::disjoint_cliques({4, 5}, &groups);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    EXPECT_EQ(label_propagation(two, seed), expected_partition(two, groups));
  }
  CausalGraph empty = directed_graph(4, {});
  EXPECT_EQ(label_propagation(empty), Partition::singletons(ids(empty)));
  CausalGraph with_isolated = directed_graph(7, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
  Partition p = label_propagation(with_isolated);
  for (std::size_t v = 0; v < 6; ++v) EXPECT_NE(p.membership()[v], p.membership()[6]);
}

TEST(AllAlgorithms, PlantedCliqueRecovery) {
  for (std::size_t k : {2u, 3u, 4u}) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      std::mt19937_64 rng(seed * 100 + k);
      std::vector<std::size_t> sizes;
      for (std::size_t i = 0; i < k; ++i) sizes.push_back(3 + rng() % 4);
      std::vector<std::vector<std::size_t>> groups;
      CausalGraph g = testing::disjoint_cliques(sizes, &groups);
      const Partition want = expected_partition(g, groups);
      EXPECT_EQ(leiden(g, 1.0, seed), want) << "leiden k=" << k << " seed=" << seed;
      EXPECT_EQ(girvan_newman(g), want) << "girvan-newman k=" << k;
      EXPECT_EQ(infomap_two_level(g, seed), want) << "infomap k=" << k << " seed=" << seed;
      EXPECT_EQ(label_propagation(g, seed), want) << "label propagation k=" << k << " seed=" << seed;
    }
  }
}

TEST(AllAlgorithms, ValidAndDeterministicOnRandomGraphs) {
  std::mt19937_64 rng(88);
  for (int trial = 0; trial < 60; ++trial) {
    CausalGraph g = testing::random_directed_graph(rng, 1, 10);
    for (CommunityAlgorithm a : {CommunityAlgorithm::kLeiden, CommunityAlgorithm::kGirvanNewman,
                                 CommunityAlgorithm::kInfomap, CommunityAlgorithm::kLabelPropagation}) {
      if (a == CommunityAlgorithm::kInfomap && g.edge_count() == 0) continue;
      Partition p = detect_communities(g, a, 1.0, 7);
      expect_valid(p, g);
      EXPECT_EQ(p, detect_communities(g, a, 1.0, 7)) << to_string(a);
    }
  }
}

TEST(Alignment, Examples) {
  std::vector<FactorNode> nodes = {make_node("a", FactorCategory::kPresenting), make_node("b", FactorCategory::kPresenting),
                                   make_node("c", FactorCategory::kPerpetuating)};
  CausalGraph g = build_graph("s", nodes, {make_edge("a", "b")}, GraphOrigin::kHuman);
  AlignmentReport mixed = category_alignment(g, Partition::from_labels(ids(g), {0, 0, 0}));
  ASSERT_EQ(mixed.communities.size(), 1u);
  EXPECT_EQ(mixed.communities[0].majority, FactorCategory::kPresenting);
  EXPECT_DOUBLE_EQ(mixed.communities[0].majority_fraction, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(mixed.purity, 2.0 / 3.0);
  EXPECT_EQ(category_alignment(g, Partition::from_labels(ids(g), {0, 0, 1})).purity, 1.0);
  EXPECT_EQ(category_alignment(g, Partition::singletons(ids(g))).purity, 1.0);
  EXPECT_ERROR_CODE(category_alignment(g, Partition::singletons({"a"})), ErrorCode::kPartitionMismatch);
}

TEST(Alignment, TieGoesToEnumOrder) {
  std::vector<FactorNode> nodes = {make_node("a", FactorCategory::kPerpetuating), make_node("b", FactorCategory::kPredisposing)};
  CausalGraph g = build_graph("s", nodes, {}, GraphOrigin::kHuman);
  EXPECT_EQ(category_alignment(g, Partition::from_labels(ids(g), {0, 0})).communities[0].majority,
            FactorCategory::kPredisposing);
}

TEST(PartitionDocument, Shape) {
  CausalGraph g = bridged_triangles();
  Partition p = detect_communities(g, CommunityAlgorithm::kInfomap, 1.0, 42);
  nlohmann::json doc = partition_document(g, p, CommunityAlgorithm::kInfomap, 1.0, 42);
  EXPECT_EQ(doc["algorithm"], "infomap");
  EXPECT_EQ(doc["seed"], 42);
  EXPECT_TRUE(doc["resolution"].is_null());
  EXPECT_EQ(doc["community_count"], 2);
  EXPECT_EQ(doc["assignments"].size(), 6u);
  EXPECT_TRUE(doc["quality"]["map_equation"].is_number());
  nlohmann::json gn = partition_document(g, girvan_newman(g), CommunityAlgorithm::kGirvanNewman, 1.0, 42);
  EXPECT_TRUE(gn["seed"].is_null());
  EXPECT_NEAR(gn["quality"]["modularity"].get<double>(), 0.35714285714285715, 1e-12);
  EXPECT_EQ(parse_algorithm("label-propagation"), CommunityAlgorithm::kLabelPropagation);
  EXPECT_FALSE(parse_algorithm("louvain"));
}

}  // namespace
}  // namespace casegraph
