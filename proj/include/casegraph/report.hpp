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

// Pairwise graph comparison reports and their per-group aggregation.

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "casegraph/embedding.hpp"
#include "casegraph/graph.hpp"
#include "casegraph/semantic.hpp"
#include "casegraph/warning_log.hpp"

namespace casegraph {

enum class ComparisonMetric { kNetSimile, kMeanEdgeSimilarity, kNodeSetSimilarity, kNodeCentralitySimilarity };

inline constexpr std::array<ComparisonMetric, 4> kComparisonMetrics = {
    ComparisonMetric::kNetSimile, ComparisonMetric::kMeanEdgeSimilarity, ComparisonMetric::kNodeSetSimilarity,
    ComparisonMetric::kNodeCentralitySimilarity};

std::string_view to_string(ComparisonMetric metric);     // snake_case key
std::string_view display_name(ComparisonMetric metric);  // column heading

inline constexpr const char* kPairAB = "A vs B";
inline constexpr const char* kPairAutoA = "Auto vs A";
inline constexpr const char* kPairAutoB = "Auto vs B";
inline constexpr const char* kDefaultGroup = "ALL";
inline constexpr const char* kTotalGroup = "TOTAL";

// A metric that could not be computed keeps its error code instead.
struct MetricValue {
  std::optional<double> value;
  std::optional<std::string> error;
};

struct ComparisonReport {
  std::string session_id;
  std::string pair_label;
  std::string group = kDefaultGroup;
  std::array<MetricValue, 4> metrics;  // indexed like kComparisonMetrics

  const MetricValue& operator[](ComparisonMetric m) const { return metrics[static_cast<std::size_t>(m)]; }
};

// NetSimile plus the three semantic measures. Per-metric failures are
// recorded in the report; other fields are still computed.
ComparisonReport compare(const CausalGraph& a, const CausalGraph& b, EmbeddingProvider& provider,
                         const SemanticOptions& options = {}, std::string pair_label = "");

nlohmann::json to_json(const ComparisonReport& report);

struct CellStats {
  std::size_t count = 0;  // non-null values
  std::optional<double> mean;
  std::optional<double> sd;  // sample SD; undefined for fewer than two values
};

struct AggregateRow {
  std::string group;
  std::string pair_label;
  std::size_t sessions = 0;
  std::array<CellStats, 4> metrics;
};

struct AggregateSummary {
  std::vector<AggregateRow> rows;
};

// Rows: each group in sorted order, then TOTAL over every report. Within a
// group: A vs B, Auto vs A, Auto vs B, then other labels sorted. Throws
// EmptyInput.
AggregateSummary aggregate(const std::vector<ComparisonReport>& reports);

nlohmann::json to_json(const AggregateSummary& summary);

// Fixed-width text table, one row per (group, pair) with Mean/Std columns.
std::string render_table(const AggregateSummary& summary);

struct ReportOptions {
  SemanticOptions semantic;
  int parallelism = 1;
};

// Reads every *.json graph in `dir`, groups them by session id and compares
// the automated graph with the human ones. Human graphs are ordered by
// annotator id and called A and B. An optional groups.csv with header
// session_id,group assigns groups; other sessions fall in "ALL". Sessions
// are processed concurrently and returned in (session id, pair) order.
std::vector<ComparisonReport> compare_directory(const std::filesystem::path& dir, EmbeddingProvider& provider,
                                                const ReportOptions& options, WarningLog* log = nullptr);

// {"sessions": [...reports], "summary": ..., "metadata": ...}
nlohmann::json report_document(const std::vector<ComparisonReport>& reports, const AggregateSummary& summary);

}  // namespace casegraph
