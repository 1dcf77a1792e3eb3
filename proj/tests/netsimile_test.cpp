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

#include <cmath>
#include <random>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "casegraph/netsimile.hpp"
#include "expect_error.hpp"
#include "test_support.hpp"

namespace casegraph {
namespace {

using testing::directed_graph;

// Features straight from the definition, enumerating all edges per node.
NodeFeatureVector brute_features(const SimpleGraph& g, std::size_t v) {
  const std::size_t n = g.node_count();
  auto adjacent = [&](std::size_t a, std::size_t b) {
    for (auto [x, y] : g.edges()) {
      if ((x == a && y == b) || (x == b && y == a)) return true;
    }
    return false;
  };
  auto degree = [&](std::size_t a) {
    std::size_t d = 0;
    for (auto [x, y] : g.edges()) d += (x == a) + (y == a);
    return d;
  };
  auto clustering = [&](std::size_t a) {
    std::vector<std::size_t> nb;
    for (std::size_t u = 0; u < n; ++u) {
      if (adjacent(a, u)) nb.push_back(u);
    }
    if (nb.size() < 2) return 0.0;
    double links = 0;
    for (std::size_t i = 0; i < nb.size(); ++i) {
      for (std::size_t j = i + 1; j < nb.size(); ++j) links += adjacent(nb[i], nb[j]);
    }
    return 2 * links / (nb.size() * (nb.size() - 1.0));
  };
  NodeFeatureVector f;
  std::set<std::size_t> ego = {v};
  std::vector<std::size_t> nb;
  for (std::size_t u = 0; u < n; ++u) {
    if (adjacent(v, u)) {
      nb.push_back(u);
      ego.insert(u);
    }
  }
  f.degree = static_cast<double>(nb.size());
  f.clustering = clustering(v);
  for (std::size_t u : nb) {
    f.mean_neighbor_degree += static_cast<double>(degree(u)) / static_cast<double>(nb.size());
    f.mean_neighbor_clustering += clustering(u) / static_cast<double>(nb.size());
  }
  std::set<std::size_t> outside;
  for (auto [x, y] : g.edges()) {
    const bool in_x = ego.count(x) != 0, in_y = ego.count(y) != 0;
    if (in_x && in_y) f.egonet_edges += 1;
    if (in_x != in_y) {
      f.egonet_outgoing_edges += 1;
      outside.insert(in_x ? y : x);
    }
  }
  f.egonet_neighbors = static_cast<double>(outside.size());
  return f;
}

TEST(NodeFeatures, HandEvaluatedCases) {
  SimpleGraph isolated = make_simple_graph(1, {});
  EXPECT_EQ(node_features(isolated, 0), NodeFeatureVector{});

  SimpleGraph k3 = make_simple_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  EXPECT_EQ(node_features(k3, 1), (NodeFeatureVector{2, 1, 2, 1, 3, 0, 0}));

  SimpleGraph star = make_simple_graph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
  NodeFeatureVector center = node_features(star, 0);
  EXPECT_EQ(center.degree, 4);
  EXPECT_EQ(center.clustering, 0);
  EXPECT_EQ(center.mean_neighbor_degree, 1);
  EXPECT_EQ(center.egonet_edges, 4);
  EXPECT_EQ(center.egonet_outgoing_edges, 0);
  EXPECT_EQ(center.egonet_neighbors, 0);
}

TEST(NodeFeatures, UnknownNode) {
  EXPECT_ERROR_CODE(node_features(make_simple_graph(2, {{0, 1}}), "nope"), ErrorCode::kUnknownNode);
}

TEST(NodeFeatures, MatchBruteForceEgonetEnumeration) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    SimpleGraph g = undirected_projection(testing::random_directed_graph(rng, 1, 8));
    for (std::size_t v = 0; v < g.node_count(); ++v) {
      const auto got = node_features(g, v).as_array();
      const auto want = brute_features(g, v).as_array();
      for (std::size_t k = 0; k < kNodeFeatureCount; ++k) {
        // Integer features compare exactly; means differ only by summation order.
        EXPECT_NEAR(got[k], want[k], 1e-12) << "trial " << trial << " node " << v << " feature " << k;
        EXPECT_GE(got[k], 0);
      }
      EXPECT_LE(got[1], 1);
      EXPECT_LE(got[3], 1);
    }
  }
}

TEST(Signature, SingleNodeIsAllZero) {
  for (double x : graph_signature(make_simple_graph(1, {}))) EXPECT_EQ(x, 0);
  EXPECT_ERROR_CODE(graph_signature(SimpleGraph{}), ErrorCode::kEmptyGraph);
}

TEST(Signature, TriangleDegreeBlock) {
  auto sig = graph_signature(make_simple_graph(3, {{0, 1}, {1, 2}, {0, 2}}));
  EXPECT_EQ(sig[0], 2);
  EXPECT_EQ(sig[1], 2);
  EXPECT_EQ(sig[2], 0);
  EXPECT_EQ(sig[3], 0);
  EXPECT_EQ(sig[4], 0);
  EXPECT_EQ(signature_labels()[0], "degree.median");
}

TEST(Signature, PathMatchesIndependentOracle) {
  // Frozen from tests/oracles/frozen_values.py (numpy/scipy moments).
  const double oracle[kSignatureLength] = {
      1.0, 1.3333333333333333, 0.4714045207910317, 0.7071067811865479, -1.4999999999999993,
      0.0, 0.0, 0.0, 0.0, 0.0,
      2.0, 1.6666666666666667, 0.4714045207910317, -0.7071067811865479, -1.4999999999999993,
      0.0, 0.0, 0.0, 0.0, 0.0,
      1.0, 1.3333333333333333, 0.4714045207910317, 0.7071067811865479, -1.4999999999999993,
      1.0, 0.6666666666666666, 0.4714045207910317, -0.7071067811865475, -1.5000000000000002,
      1.0, 0.6666666666666666, 0.4714045207910317, -0.7071067811865475, -1.5000000000000002};
  auto sig = graph_signature(make_simple_graph(3, {{0, 1}, {1, 2}}));
  for (std::size_t i = 0; i < kSignatureLength; ++i) EXPECT_NEAR(sig[i], oracle[i], 1e-12) << signature_labels()[i];
}

TEST(Canberra, Examples) {
  std::vector<double> x = {1, 2, 3}, a = {1, 0}, b = {0, 1}, z = {0, 0};
  EXPECT_EQ(canberra_distance(x, x), 0);
  EXPECT_EQ(canberra_distance(a, b), 2);
  EXPECT_EQ(canberra_distance(z, z), 0);
  EXPECT_ERROR_CODE(canberra_distance(x, a), ErrorCode::kLengthMismatch);
}

TEST(Similarity, TriangleVersusPath) {
  CausalGraph k3 = directed_graph(3, {{0, 1}, {1, 2}, {0, 2}});
  CausalGraph p3 = directed_graph(3, {{0, 1}, {1, 2}});
  const double s = netsimile_similarity(k3, p3);
  EXPECT_NEAR(s, 0.2997469197469197, 1e-12);  // independent oracle
  EXPECT_GT(s, 0);
  EXPECT_LT(s, 1);
}

TEST(Similarity, IdentitySymmetryAndRange) {
  std::mt19937_64 rng(202);
  for (int i = 0; i < 100; ++i) {
    CausalGraph g = testing::random_directed_graph(rng, 1, 10);
    CausalGraph h = testing::random_directed_graph(rng, 1, 10);
    EXPECT_EQ(netsimile_similarity(g, g), 1.0);
    const double gh = netsimile_similarity(g, h);
    EXPECT_EQ(gh, netsimile_similarity(h, g));
    EXPECT_GE(gh, 0);
    EXPECT_LE(gh, 1);
  }
}

TEST(Similarity, RelabelingKeepsSignature) {
  std::mt19937_64 rng(303);
  for (int i = 0; i < 50; ++i) {
    CausalGraph g = testing::random_directed_graph(rng, 1, 10);
    CausalGraph r = testing::relabeled(g, rng);
    auto a = graph_signature(undirected_projection(g));
    auto b = graph_signature(undirected_projection(r));
    EXPECT_EQ(a, b);
    EXPECT_EQ(netsimile_similarity(g, r), 1.0);
  }
}

TEST(Similarity, EmptyGraphRejected) {
  CausalGraph empty = build_graph("e", {}, {}, GraphOrigin::kHuman);
  EXPECT_ERROR_CODE(netsimile_similarity(empty, directed_graph(1, {})), ErrorCode::kEmptyGraph);
}

TEST(Similarity, IsolatedNodeAddedToBoth) {
  CausalGraph g = directed_graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 1}});
  CausalGraph g_plus = directed_graph(5, {{0, 1}, {1, 2}, {2, 3}, {3, 1}});
  EXPECT_EQ(netsimile_similarity(g_plus, g_plus), 1.0);
  EXPECT_LT(netsimile_similarity(g, g_plus), 1.0);
}

}  // namespace
}  // namespace casegraph
