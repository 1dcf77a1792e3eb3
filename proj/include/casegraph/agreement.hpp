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

// Inter-rater agreement (Fleiss' kappa) and rubric score summaries.

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace casegraph {

// counts[i][j]: raters assigning subject i to category j.
struct RatingMatrix {
  std::vector<std::vector<int>> counts;

  std::size_t subjects() const { return counts.size(); }
  std::size_t categories() const { return counts.empty() ? 0 : counts.front().size(); }
  // Throws InvalidMatrix unless N >= 2, k >= 2, n >= 2, cells >= 0 and every
  // row sums to the same n. Returns n.
  int validate() const;
};

// Throws InvalidMatrix or DegenerateExpectedAgreement.
double fleiss_kappa(const RatingMatrix& matrix);

enum class RubricDimension {
  kCompleteness,
  kConsistency,
  kSpecificity,
  kPlausibilityNodes,
  kPlausibilityEdges,
  kUtility,
};

inline constexpr std::array<RubricDimension, 6> kRubricDimensions = {
    RubricDimension::kCompleteness,      RubricDimension::kConsistency,       RubricDimension::kSpecificity,
    RubricDimension::kPlausibilityNodes, RubricDimension::kPlausibilityEdges, RubricDimension::kUtility};

inline constexpr int kMinScore = 1;
inline constexpr int kMaxScore = 5;

std::string_view to_string(RubricDimension dimension);
// Case-insensitive; ignores spaces, '-' and '_' ("plausibility_nodes").
std::optional<RubricDimension> parse_dimension(std::string_view name);

struct RubricScore {
  std::string rater_id;
  std::string session_id;
  RubricDimension dimension = RubricDimension::kCompleteness;
  int score = kMinScore;
};

class RubricScores {
 public:
  // Throws InvalidScores on out-of-range or repeated (rater, session,
  // dimension) entries.
  explicit RubricScores(std::vector<RubricScore> entries);

  // Delimited table with header rater_id,session_id,dimension,score (any
  // column order). Throws MalformedDocument or InvalidScores.
  static RubricScores parse_csv(std::string_view document);

  const std::vector<RubricScore>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::vector<std::string> raters() const;    // sorted, unique
  std::vector<std::string> sessions() const;  // sorted, unique
  std::optional<int> find(std::string_view rater, std::string_view session, RubricDimension dimension) const;

 private:
  std::vector<RubricScore> entries_;  // sorted by (rater, session, dimension)
};

// Subjects are sessions (sorted), categories the five score levels. Throws
// MissingRating naming the absent (rater, session).
RatingMatrix scores_to_matrix(const RubricScores& scores, RubricDimension dimension);

struct RaterTotal {
  std::string rater_id;
  double total = 0;  // six-dimension sum averaged over sessions
};

struct RatingSummary {
  std::array<double, 6> dimension_means{};
  std::vector<RaterTotal> rater_totals;
  double mean_rater_total = 0;
  std::optional<double> sd_rater_totals;  // sample SD; undefined for one rater
  // Per-session totals averaged over raters, and every (rater, session) total.
  std::vector<double> session_totals;
  std::optional<double> sd_session_totals;
  std::optional<double> sd_individual_totals;
};

// Throws EmptyScores, or MissingRating when a (rater, session) lacks one of
// the six dimensions.
RatingSummary rating_summary(const RubricScores& scores);

// Sample standard deviation; nullopt for fewer than two values.
std::optional<double> sample_sd(const std::vector<double>& values);

// Summary, per-dimension kappa (null when undefined, with the reason) and a
// note on how the SD is computed.
nlohmann::json agreement_document(const RubricScores& scores);

}  // namespace casegraph
