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
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "casegraph/embedding.hpp"
#include "casegraph/graph_io.hpp"
#include "casegraph/semantic.hpp"
#include "expect_error.hpp"
#include "test_support.hpp"

namespace casegraph {
namespace {

using testing::make_edge;
using testing::make_node;

CausalGraph labelled(const std::vector<std::string>& labels, const std::vector<std::pair<int, int>>& arcs,
                     const std::string& session = "s") {
  std::vector<FactorNode> nodes;
  for (const auto& l : labels) nodes.push_back(make_node(slugify(l), FactorCategory::kPresenting, l));
  std::vector<CausalEdge> edges;
  for (auto [u, v] : arcs) edges.push_back(make_edge(slugify(labels[u]), slugify(labels[v])));
  return build_graph(session, nodes, edges, GraphOrigin::kHuman);
}

TableEmbeddingProvider fixture_table() { return TableEmbeddingProvider::from_file(testing::data_path("embedding_table.tsv")); }

// alpha -> beta -> gamma against alpha -> delta.
CausalGraph left_graph() { return labelled({"alpha", "beta", "gamma"}, {{0, 1}, {1, 2}}, "left"); }
CausalGraph right_graph() { return labelled({"alpha", "delta"}, {{0, 1}}, "right"); }

TEST(Embedding, HashProviderIsUnitNormAndDeterministic) {
  HashEmbeddingProvider p(64);
  Embedding a = p.embed("low mood");
  double norm = 0;
  for (double x : a) norm += x * x;
  EXPECT_NEAR(std::sqrt(norm), 1.0, 1e-12);
  EXPECT_EQ(a, p.embed("low mood"));
  EXPECT_EQ(a, HashEmbeddingProvider(64).embed("low mood"));
  EXPECT_NE(a, p.embed("low  mood"));
  EXPECT_EQ(a.size(), p.dimension());
}

TEST(Embedding, TableParsingAndErrors) {
  TableEmbeddingProvider t = TableEmbeddingProvider::parse("# comment\n\nx\t3,4\ny\t0,1\n");
  EXPECT_EQ(t.dimension(), 2u);
  EXPECT_DOUBLE_EQ(t.embed("x")[0], 0.6);
  EXPECT_ERROR_CODE(t.embed("z"), ErrorCode::kUnknownText);
  EXPECT_ERROR_CODE(TableEmbeddingProvider::parse("x\t1,2\ny\t1\n"), ErrorCode::kLengthMismatch);
  EXPECT_ERROR_CODE(normalized({0.0, 0.0}), ErrorCode::kZeroMeanVector);
}

TEST(Embedding, CacheReturnsSameVector) {
  HashEmbeddingProvider inner(16);
  CachingEmbeddingProvider cache(inner);
  EXPECT_EQ(cache.embed("a"), inner.embed("a"));
  EXPECT_EQ(cache.embed("a"), cache.embed("a"));
  EXPECT_EQ(cache.dimension(), 16u);
}

TEST(EdgeText, Template) {
  CausalGraph g = labelled({"insomnia", "daytime   fatigue"}, {{0, 1}});
  EXPECT_EQ(edge_text(g.edges()[0], g), "insomnia causes daytime   fatigue");
  EXPECT_EQ(edge_text(g.edges()[0], g, "{target} <- {source}"), "daytime   fatigue <- insomnia");
  EXPECT_ERROR_CODE(edge_text(make_edge("insomnia", "nope"), g), ErrorCode::kUnknownEdge);
}

TEST(EdgeText, AddictionCaseGolden) {
  CausalGraph g = load_graph(testing::data_path("golden/addiction_graph.json"));
  std::string texts;
  for (const auto& e : g.edges()) texts += edge_text(e, g) + "\n";
  const auto path = testing::data_path("golden/addiction_edge_texts.txt");
  if (std::getenv("CASEGRAPH_UPDATE_GOLDEN")) write_file(path, texts);
  EXPECT_EQ(read_file(path), texts);
}

TEST(EdgeSimilarity, HandComputedTable) {
  auto p = fixture_table();
  // Forward rows 0.6 and 0.8, backward row 0.8: (0.7 + 0.8) / 2.
  EXPECT_NEAR(edge_similarity(left_graph(), right_graph(), p), 0.75, 1e-12);
  SimilarityBreakdown b = semantic_breakdown(left_graph(), right_graph(), p);
  ASSERT_EQ(b.forward_edges.rows.size(), 2u);
  ASSERT_EQ(b.backward_edges.rows.size(), 1u);
  EXPECT_NEAR(b.forward_edges.mean, (b.forward_edges.rows[0].cosine + b.forward_edges.rows[1].cosine) / 2, 1e-15);
  EXPECT_EQ(b.backward_edges.rows[0].matched_text, "beta causes gamma");
}

TEST(NodeSetSimilarity, HandComputedTable) {
  auto p = fixture_table();
  EXPECT_NEAR(node_set_similarity(left_graph(), right_graph(), p), 0.9855985596534886, 1e-12);
}

TEST(NodeCentralitySimilarity, HandComputedTable) {
  auto p = fixture_table();
  EXPECT_EQ(prominent_labels(left_graph(), 2), (std::vector<std::string>{"beta", "alpha"}));
  EXPECT_NEAR(node_centrality_similarity(left_graph(), right_graph(), p, 2), 0.8535533905932737, 1e-12);
  EXPECT_ERROR_CODE(node_centrality_similarity(left_graph(), right_graph(), p, 0), ErrorCode::kInvalidConfig);
}

TEST(Semantic, OrthogonalFixtureGivesZero) {
  auto p = fixture_table();
  CausalGraph a = labelled({"p", "q"}, {{0, 1}});
  CausalGraph b = labelled({"r", "s"}, {{0, 1}});
  EXPECT_EQ(edge_similarity(a, b, p), 0.0);
  EXPECT_EQ(node_set_similarity(a, b, p), 0.0);
  EXPECT_EQ(node_centrality_similarity(a, b, p, 1), 0.0);
}

TEST(Semantic, Errors) {
  HashEmbeddingProvider p;
  CausalGraph edgeless = labelled({"a"}, {});
  CausalGraph empty = build_graph("e", {}, {}, GraphOrigin::kHuman);
  EXPECT_ERROR_CODE(edge_similarity(edgeless, left_graph(), p), ErrorCode::kEdgelessGraph);
  EXPECT_ERROR_CODE(edge_similarity(left_graph(), edgeless, p), ErrorCode::kEdgelessGraph);
  EXPECT_ERROR_CODE(node_set_similarity(empty, left_graph(), p), ErrorCode::kEmptyGraph);
  EXPECT_ERROR_CODE(node_centrality_similarity(left_graph(), empty, p), ErrorCode::kEmptyGraph);
  auto cancel = TableEmbeddingProvider::parse("u\t1,0\nv\t-1,0\nw\t0,1\n");
  EXPECT_ERROR_CODE(node_set_similarity(labelled({"u", "v"}, {}), labelled({"w"}, {}), cancel),
                    ErrorCode::kZeroMeanVector);
}

TEST(Semantic, SelfSimilaritySymmetryAndOrderInvariance) {
  HashEmbeddingProvider p(64);
  std::mt19937_64 rng(404);
  const std::vector<std::string> vocab = {"low mood", "insomnia", "job loss", "rumination", "avoidance",
                                          "breakup", "panic", "isolation", "alcohol use", "perfectionism"};
  for (int trial = 0; trial < 40; ++trial) {
    auto make = [&] {
      std::vector<std::string> labels = vocab;
      std::shuffle(labels.begin(), labels.end(), rng);
      labels.resize(2 + rng() % 7);
      std::vector<std::pair<int, int>> arcs;
      for (int u = 0; u < static_cast<int>(labels.size()); ++u) {
        for (int v = 0; v < static_cast<int>(labels.size()); ++v) {
          if (u != v && rng() % 3 == 0) arcs.emplace_back(u, v);
        }
      }
      if (arcs.empty()) arcs.emplace_back(0, 1);
      return labelled(labels, arcs);
    };
    CausalGraph g = make(), h = make();
    EXPECT_NEAR(edge_similarity(g, g, p), 1.0, 1e-6);
    EXPECT_NEAR(node_set_similarity(g, g, p), 1.0, 1e-6);
    EXPECT_NEAR(node_centrality_similarity(g, g, p), 1.0, 1e-6);
    EXPECT_NEAR(edge_similarity(g, h, p), edge_similarity(h, g, p), 1e-15);
    EXPECT_EQ(node_set_similarity(g, h, p), node_set_similarity(h, g, p));
    EXPECT_NEAR(node_centrality_similarity(g, h, p), node_centrality_similarity(h, g, p), 1e-15);

    // Same graph, nodes and edges supplied in a different order.
    std::vector<FactorNode> nodes(g.nodes().rbegin(), g.nodes().rend());
    std::vector<CausalEdge> edges(g.edges().rbegin(), g.edges().rend());
    CausalGraph shuffled = build_graph("s", nodes, edges, GraphOrigin::kHuman);
    EXPECT_EQ(edge_similarity(shuffled, h, p), edge_similarity(g, h, p));
    EXPECT_EQ(node_set_similarity(shuffled, h, p), node_set_similarity(g, h, p));
  }
}

TEST(Semantic, RepeatedRunsAreBitIdentical) {
  HashEmbeddingProvider p1(64), p2(64);
  CausalGraph g = load_graph(testing::data_path("golden/addiction_graph.json"));
  EXPECT_EQ(edge_similarity(g, left_graph(), p1), edge_similarity(g, left_graph(), p2));
  EXPECT_EQ(node_set_similarity(g, right_graph(), p1), node_set_similarity(g, right_graph(), p2));
}

}  // namespace
}  // namespace casegraph
