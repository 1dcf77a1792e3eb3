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

#include "casegraph/agreement.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <tuple>

#include "casegraph/error.hpp"

namespace casegraph {

int RatingMatrix::validate() const {
  if (subjects() < 2) throw Error(ErrorCode::kInvalidMatrix, "need at least 2 subjects");
  if (categories() < 2) throw Error(ErrorCode::kInvalidMatrix, "need at least 2 categories");
  int raters = -1;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const auto& row = counts[i];
    if (row.size() != categories()) {
      throw Error(ErrorCode::kInvalidMatrix, "row " + std::to_string(i) + " has " + std::to_string(row.size()) +
                                                 " columns, expected " + std::to_string(categories()));
    }
    int sum = 0;
    for (int c : row) {
      if (c < 0) throw Error(ErrorCode::kInvalidMatrix, "negative count in row " + std::to_string(i));
      sum += c;
    }
    if (raters < 0) raters = sum;
    if (sum != raters) {
      throw Error(ErrorCode::kInvalidMatrix, "row " + std::to_string(i) + " sums to " + std::to_string(sum) +
                                                 ", expected " + std::to_string(raters));
    }
  }
  if (raters < 2) throw Error(ErrorCode::kInvalidMatrix, "need at least 2 raters per subject");
  return raters;
}

double fleiss_kappa(const RatingMatrix& matrix) {
  const int raters = matrix.validate();
  const double n = raters;
  const double subjects = static_cast<double>(matrix.subjects());
  std::vector<double> column(matrix.categories(), 0.0);
  double p_bar = 0;
  for (const auto& row : matrix.counts) {
    double sq = 0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      sq += static_cast<double>(row[j]) * row[j];
      column[j] += row[j];
    }
    p_bar += (sq - n) / (n * (n - 1));
  }
  p_bar /= subjects;
  double p_e = 0;
  for (double c : column) {
    const double p = c / (subjects * n);
    p_e += p * p;
  }
  // p_e == 1 only when every rating falls in one category.
  if (p_e >= 1.0 - 1e-12) {
    throw Error(ErrorCode::kDegenerateExpectedAgreement, "all ratings fall in one category; kappa is undefined");
  }
  return (p_bar - p_e) / (1.0 - p_e);
}

std::string_view to_string(RubricDimension dimension) {
  switch (dimension) {
    case RubricDimension::kCompleteness:
      return "Completeness";
    case RubricDimension::kConsistency:
      return "Consistency";
    case RubricDimension::kSpecificity:
      return "Specificity";
    case RubricDimension::kPlausibilityNodes:
      return "PlausibilityNodes";
    case RubricDimension::kPlausibilityEdges:
      return "PlausibilityEdges";
    case RubricDimension::kUtility:
      return "Utility";
  }
  return "unknown";
}

namespace {

std::string fold(std::string_view s) {
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c)) out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  while (true) {
    const auto comma = line.find(',');
    fields.push_back(trim(line.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return fields;
}

std::string missing(std::string_view rater, std::string_view session) {
  return "rater '" + std::string(rater) + "' has no complete rating for session '" + std::string(session) + "'";
}

}  // namespace

std::optional<RubricDimension> parse_dimension(std::string_view name) {
  const std::string key = fold(name);
  for (RubricDimension d : kRubricDimensions) {
    if (fold(to_string(d)) == key) return d;
  }
  return std::nullopt;
}

RubricScores::RubricScores(std::vector<RubricScore> entries) : entries_(std::move(entries)) {
  auto key = [](const RubricScore& s) { return std::tie(s.rater_id, s.session_id, s.dimension); };
  std::sort(entries_.begin(), entries_.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (e.score < kMinScore || e.score > kMaxScore) {
      throw Error(ErrorCode::kInvalidScores, "score " + std::to_string(e.score) + " outside " +
                                                 std::to_string(kMinScore) + ".." + std::to_string(kMaxScore));
    }
    if (i > 0 && key(entries_[i - 1]) == key(e)) {
      throw Error(ErrorCode::kInvalidScores, "repeated score for rater '" + e.rater_id + "', session '" +
                                                 e.session_id + "', " + std::string(to_string(e.dimension)));
    }
  }
}

RubricScores RubricScores::parse_csv(std::string_view document) {
  std::vector<RubricScore> entries;
  std::array<std::size_t, 4> column{};
  bool have_header = false;
  std::size_t line_no = 0;
  while (!document.empty()) {
    const auto nl = document.find('\n');
    std::string_view line = document.substr(0, nl);
    document.remove_prefix(nl == std::string_view::npos ? document.size() : nl + 1);
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto fields = split_fields(line);
    const std::string where = "ratings line " + std::to_string(line_no);
    if (!have_header) {
      const std::array<std::string_view, 4> names = {"rater_id", "session_id", "dimension", "score"};
      for (std::size_t c = 0; c < names.size(); ++c) {
        auto it = std::find(fields.begin(), fields.end(), names[c]);
        if (it == fields.end()) {
          throw Error(ErrorCode::kMalformedDocument, where + ": header lacks column '" + std::string(names[c]) + "'");
        }
        column[c] = static_cast<std::size_t>(it - fields.begin());
      }
      have_header = true;
      continue;
    }
    if (fields.size() <= *std::max_element(column.begin(), column.end())) {
      throw Error(ErrorCode::kMalformedDocument, where + ": too few fields");
    }
    RubricScore s;
    s.rater_id = std::string(fields[column[0]]);
    s.session_id = std::string(fields[column[1]]);
    const auto dim = parse_dimension(fields[column[2]]);
    if (!dim) {
      throw Error(ErrorCode::kInvalidScores, where + ": unknown dimension '" + std::string(fields[column[2]]) + "'");
    }
    s.dimension = *dim;
    const std::string_view score = fields[column[3]];
    auto [ptr, ec] = std::from_chars(score.data(), score.data() + score.size(), s.score);
    if (ec != std::errc() || ptr != score.data() + score.size()) {
      throw Error(ErrorCode::kInvalidScores, where + ": score '" + std::string(score) + "' is not an integer");
    }
    if (s.rater_id.empty() || s.session_id.empty()) {
      throw Error(ErrorCode::kMalformedDocument, where + ": empty rater or session id");
    }
    entries.push_back(std::move(s));
  }
  if (!have_header) throw Error(ErrorCode::kMalformedDocument, "ratings table has no header");
  return RubricScores(std::move(entries));
}

std::vector<std::string> RubricScores::raters() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) out.push_back(e.rater_id);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::string> RubricScores::sessions() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) out.push_back(e.session_id);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<int> RubricScores::find(std::string_view rater, std::string_view session,
                                      RubricDimension dimension) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), std::tie(rater, session, dimension),
                             [](const RubricScore& s, const auto& key) {
                               return std::tie(s.rater_id, s.session_id, s.dimension) < key;
                             });
  if (it == entries_.end() || it->rater_id != rater || it->session_id != session || it->dimension != dimension) {
    return std::nullopt;
  }
  return it->score;
}

RatingMatrix scores_to_matrix(const RubricScores& scores, RubricDimension dimension) {
  RatingMatrix m;
  const auto raters = scores.raters();
  for (const auto& session : scores.sessions()) {
    std::vector<int> row(kMaxScore - kMinScore + 1, 0);
    for (const auto& rater : raters) {
      const auto score = scores.find(rater, session, dimension);
      if (!score) {
        throw Error(ErrorCode::kMissingRating, "rater '" + rater + "' has no " + std::string(to_string(dimension)) +
                                                   " score for session '" + session + "'");
      }
      ++row[static_cast<std::size_t>(*score - kMinScore)];
    }
    m.counts.push_back(std::move(row));
  }
  return m;
}

std::optional<double> sample_sd(const std::vector<double>& values) {
  if (values.size() < 2) return std::nullopt;
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  double ss = 0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

RatingSummary rating_summary(const RubricScores& scores) {
  if (scores.empty()) throw Error(ErrorCode::kEmptyScores, "no rubric scores");
  RatingSummary s;

  std::array<double, 6> sums{};
  std::array<std::size_t, 6> counts{};
  for (const auto& e : scores.entries()) {
    sums[static_cast<std::size_t>(e.dimension)] += e.score;
    ++counts[static_cast<std::size_t>(e.dimension)];
  }
  for (std::size_t d = 0; d < 6; ++d) s.dimension_means[d] = counts[d] ? sums[d] / static_cast<double>(counts[d]) : 0.0;

  const auto raters = scores.raters();
  const auto sessions = scores.sessions();
  // total[r][k] for rater r on session k; nullopt when that rater skipped the
  // session entirely.
  std::vector<std::vector<std::optional<double>>> totals(raters.size(),
                                                          std::vector<std::optional<double>>(sessions.size()));
  std::vector<double> individual;
  for (std::size_t r = 0; r < raters.size(); ++r) {
    for (std::size_t k = 0; k < sessions.size(); ++k) {
      int sum = 0, present = 0;
      for (RubricDimension d : kRubricDimensions) {
        if (auto v = scores.find(raters[r], sessions[k], d)) {
          sum += *v;
          ++present;
        }
      }
      if (present == 0) continue;
      if (present != static_cast<int>(kRubricDimensions.size())) {
        throw Error(ErrorCode::kMissingRating, missing(raters[r], sessions[k]));
      }
      totals[r][k] = sum;
      individual.push_back(sum);
    }
  }

  std::vector<double> rater_values;
  for (std::size_t r = 0; r < raters.size(); ++r) {
    double sum = 0;
    std::size_t n = 0;
    for (const auto& t : totals[r]) {
      if (t) {
        sum += *t;
        ++n;
      }
    }
    s.rater_totals.push_back({raters[r], sum / static_cast<double>(n)});
    rater_values.push_back(s.rater_totals.back().total);
  }
  s.mean_rater_total =
      std::accumulate(rater_values.begin(), rater_values.end(), 0.0) / static_cast<double>(rater_values.size());
  s.sd_rater_totals = sample_sd(rater_values);

  for (std::size_t k = 0; k < sessions.size(); ++k) {
    double sum = 0;
    std::size_t n = 0;
    for (std::size_t r = 0; r < raters.size(); ++r) {
      if (totals[r][k]) {
        sum += *totals[r][k];
        ++n;
      }
    }
    s.session_totals.push_back(sum / static_cast<double>(n));
  }
  s.sd_session_totals = sample_sd(s.session_totals);
  s.sd_individual_totals = sample_sd(individual);
  return s;
}

nlohmann::json agreement_document(const RubricScores& scores) {
  using nlohmann::json;
  const RatingSummary s = rating_summary(scores);
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };

  json kappa = json::object(), means = json::object();
  for (RubricDimension d : kRubricDimensions) {
    const std::string name(to_string(d));
    means[name] = s.dimension_means[static_cast<std::size_t>(d)];
    try {
      kappa[name] = {{"value", fleiss_kappa(scores_to_matrix(scores, d))}, {"error", nullptr}};
    } catch (const Error& e) {
      kappa[name] = {{"value", nullptr}, {"error", std::string(to_string(e.code()))}};
    }
  }
  json totals = json::array();
  for (const auto& t : s.rater_totals) totals.push_back({{"rater_id", t.rater_id}, {"total", t.total}});

  return {{"raters", scores.raters().size()},
          {"sessions", scores.sessions().size()},
          {"fleiss_kappa", kappa},
          {"dimension_means", means},
          {"rater_totals", totals},
          {"mean_rater_total", s.mean_rater_total},
          {"sd_rater_totals", opt(s.sd_rater_totals)},
          {"session_totals", s.session_totals},
          {"sd_session_totals", opt(s.sd_session_totals)},
          {"sd_individual_totals", opt(s.sd_individual_totals)},
          {"metadata",
           {{"kappa_categories", "score levels 1..5 treated as nominal"},
            {"sd_convention", "sample (n-1) standard deviation"},
            {"sd_note",
             "sd_rater_totals spreads the per-rater mean totals; sd_session_totals spreads per-session totals "
             "averaged over raters; sd_individual_totals spreads every (rater, session) total. An SD of 4.1 quoted "
             "next to rater totals 22.3, 19.3 and 19.7 does not follow from those totals (sample SD about 1.6), "
             "so the spreads are kept separate and not reconciled."}}}};
}

}  // namespace casegraph
