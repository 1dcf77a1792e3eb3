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

#include "casegraph/report.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <thread>

#include "casegraph/agreement.hpp"
#include "casegraph/error.hpp"
#include "casegraph/graph_io.hpp"
#include "casegraph/netsimile.hpp"

namespace casegraph {

std::string_view to_string(ComparisonMetric metric) {
  switch (metric) {
    case ComparisonMetric::kNetSimile:
      return "netsimile";
    case ComparisonMetric::kMeanEdgeSimilarity:
      return "mean_edge_similarity";
    case ComparisonMetric::kNodeSetSimilarity:
      return "node_set_similarity";
    case ComparisonMetric::kNodeCentralitySimilarity:
      return "node_centrality_similarity";
  }
  return "unknown";
}

std::string_view display_name(ComparisonMetric metric) {
  switch (metric) {
    case ComparisonMetric::kNetSimile:
      return "NetSimile";
    case ComparisonMetric::kMeanEdgeSimilarity:
      return "Mean Edge Sim.";
    case ComparisonMetric::kNodeSetSimilarity:
      return "Node Set Sim.";
    case ComparisonMetric::kNodeCentralitySimilarity:
      return "Node Centrality Sim.";
  }
  return "unknown";
}

namespace {

MetricValue attempt(const std::function<double()>& fn) {
  MetricValue v;
  try {
    v.value = fn();
  } catch (const Error& e) {
    v.error = std::string(to_string(e.code()));
  }
  return v;
}

nlohmann::json opt(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

ComparisonReport compare(const CausalGraph& a, const CausalGraph& b, EmbeddingProvider& provider,
                         const SemanticOptions& options, std::string pair_label) {
  ComparisonReport r;
  r.session_id = a.session_id();
  r.pair_label = std::move(pair_label);
  r.metrics[0] = attempt([&] { return netsimile_similarity(a, b); });
  r.metrics[1] = attempt([&] { return edge_similarity(a, b, provider, options); });
  r.metrics[2] = attempt([&] { return node_set_similarity(a, b, provider); });
  r.metrics[3] = attempt([&] { return node_centrality_similarity(a, b, provider, options.top_k); });
  return r;
}

nlohmann::json to_json(const ComparisonReport& report) {
  nlohmann::json metrics = nlohmann::json::object(), errors = nlohmann::json::object();
  for (ComparisonMetric m : kComparisonMetrics) {
    const auto& v = report[m];
    metrics[std::string(to_string(m))] = opt(v.value);
    if (v.error) errors[std::string(to_string(m))] = *v.error;
  }
  return {{"session_id", report.session_id},
          {"pair", report.pair_label},
          {"group", report.group},
          {"metrics", metrics},
          {"errors", errors}};
}

AggregateSummary aggregate(const std::vector<ComparisonReport>& reports) {
  if (reports.empty()) throw Error(ErrorCode::kEmptyInput, "no comparison reports to aggregate");

  auto pair_rank = [](const std::string& label) {
    if (label == kPairAB) return 0;
    if (label == kPairAutoA) return 1;
    if (label == kPairAutoB) return 2;
    return 3;
  };
  auto pair_less = [&](const std::string& x, const std::string& y) {
    return std::make_pair(pair_rank(x), x) < std::make_pair(pair_rank(y), y);
  };

  std::set<std::string> groups;
  for (const auto& r : reports) {
    if (r.group != kTotalGroup) groups.insert(r.group);
  }
  std::vector<std::string> row_groups(groups.begin(), groups.end());
  row_groups.push_back(kTotalGroup);

  AggregateSummary summary;
  for (const auto& group : row_groups) {
    std::vector<const ComparisonReport*> members;
    for (const auto& r : reports) {
      if (group == kTotalGroup || r.group == group) members.push_back(&r);
    }
    std::vector<std::string> pairs;
    for (const auto* r : members) pairs.push_back(r->pair_label);
    std::sort(pairs.begin(), pairs.end(), pair_less);
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());

    for (const auto& pair : pairs) {
      AggregateRow row;
      row.group = group;
      row.pair_label = pair;
      for (std::size_t k = 0; k < kComparisonMetrics.size(); ++k) {
        std::vector<double> values;
        for (const auto* r : members) {
          if (r->pair_label != pair) continue;
          if (k == 0) ++row.sessions;
          if (r->metrics[k].value) values.push_back(*r->metrics[k].value);
        }
        CellStats& cell = row.metrics[k];
        cell.count = values.size();
        if (!values.empty()) {
          cell.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
        }
        cell.sd = sample_sd(values);
      }
      summary.rows.push_back(std::move(row));
    }
  }
  return summary;
}

nlohmann::json to_json(const AggregateSummary& summary) {
  using nlohmann::json;
  json columns = json::array();
  for (ComparisonMetric m : kComparisonMetrics) columns.push_back(std::string(to_string(m)));
  json rows = json::array();
  for (const auto& row : summary.rows) {
    json metrics = json::object();
    for (std::size_t k = 0; k < kComparisonMetrics.size(); ++k) {
      const auto& c = row.metrics[k];
      metrics[std::string(to_string(kComparisonMetrics[k]))] = {
          {"mean", opt(c.mean)}, {"std", opt(c.sd)}, {"n", c.count}};
    }
    rows.push_back({{"group", row.group}, {"pair", row.pair_label}, {"sessions", row.sessions}, {"metrics", metrics}});
  }
  return {{"columns", columns}, {"rows", rows}};
}

std::string render_table(const AggregateSummary& summary) {
  auto cell = [](const std::optional<double>& v) {
    if (!v) return std::string("-");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", *v);
    return std::string(buf);
  };
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> header = {"Group", "Pair", "N"};
  for (ComparisonMetric m : kComparisonMetrics) {
    header.push_back(std::string(display_name(m)) + " Mean");
    header.push_back("Std");
  }
  lines.push_back(header);
  for (const auto& row : summary.rows) {
    std::vector<std::string> line = {row.group, row.pair_label, std::to_string(row.sessions)};
    for (const auto& c : row.metrics) {
      line.push_back(cell(c.mean));
      line.push_back(cell(c.sd));
    }
    lines.push_back(std::move(line));
  }
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& line : lines) {
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  }
  std::ostringstream out;
  for (const auto& line : lines) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (i > 0) out << "  ";
      out << line[i];
      if (i + 1 < line.size()) out << std::string(width[i] - line[i].size(), ' ');
    }
    out << '\n';
  }
  return out.str();
}

namespace {

std::map<std::string, std::string> read_groups(const std::filesystem::path& file) {
  std::map<std::string, std::string> groups;
  std::istringstream in(read_file(file));
  std::string line;
  bool header = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::kMalformedDocument, "groups.csv line " + std::to_string(line_no) + ": expected 2 fields");
    }
    const std::string session = line.substr(0, comma), group = line.substr(comma + 1);
    if (header) {
      if (session != "session_id" || group != "group") {
        throw Error(ErrorCode::kMalformedDocument, "groups.csv must start with header session_id,group");
      }
      header = false;
      continue;
    }
    if (group == kTotalGroup) {
      throw Error(ErrorCode::kInvalidConfig, "group name TOTAL is reserved");
    }
    groups[session] = group;
  }
  return groups;
}

struct SessionGraphs {
  std::string session_id;
  std::vector<CausalGraph> automated;
  std::vector<CausalGraph> human;
};

}  // namespace

std::vector<ComparisonReport> compare_directory(const std::filesystem::path& dir, EmbeddingProvider& provider,
                                                const ReportOptions& options, WarningLog* log) {
  if (!std::filesystem::is_directory(dir)) throw Error(ErrorCode::kIo, "not a directory: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error(ErrorCode::kEmptyInput, "no graph files in " + dir.string());

  std::map<std::string, SessionGraphs> sessions;
  for (const auto& f : files) {
    CausalGraph g = load_graph(f);
    auto& s = sessions[g.session_id()];
    s.session_id = g.session_id();
    (g.origin() == GraphOrigin::kAutomated ? s.automated : s.human).push_back(std::move(g));
  }
  std::map<std::string, std::string> groups;
  if (std::filesystem::exists(dir / "groups.csv")) groups = read_groups(dir / "groups.csv");

  auto by_annotator = [](const CausalGraph& x, const CausalGraph& y) {
    return x.annotator_id().value_or("") < y.annotator_id().value_or("");
  };

  struct Job {
    const SessionGraphs* session;
    std::string group;
    std::vector<ComparisonReport> out;
  };
  std::vector<Job> jobs;
  for (auto& [id, s] : sessions) {
    std::stable_sort(s.human.begin(), s.human.end(), by_annotator);
    if (s.automated.size() > 1 && log) {
      log->warn("ExtraAutomatedGraph", "session '" + id + "' has " + std::to_string(s.automated.size()) +
                                           " automated graphs; using the first by file name");
    }
    if (s.human.size() > 2 && log) {
      log->warn("ExtraHumanGraph", "session '" + id + "' has " + std::to_string(s.human.size()) +
                                       " human graphs; using the first two by annotator id");
    }
    if (s.human.empty() && log) log->warn("MissingHumanGraph", "session '" + id + "' has no human graph");
    if (s.automated.empty() && log) log->warn("MissingAutomatedGraph", "session '" + id + "' has no automated graph");
    auto g = groups.find(id);
    jobs.push_back({&s, g == groups.end() ? std::string(kDefaultGroup) : g->second, {}});
  }

  auto run = [&](Job& job) {
    const SessionGraphs& s = *job.session;
    auto add = [&](const CausalGraph& x, const CausalGraph& y, const char* label) {
      ComparisonReport r = compare(x, y, provider, options.semantic, label);
      r.session_id = s.session_id;
      r.group = job.group;
      job.out.push_back(std::move(r));
    };
    if (s.human.size() >= 2) add(s.human[0], s.human[1], kPairAB);
    if (!s.automated.empty() && !s.human.empty()) add(s.automated[0], s.human[0], kPairAutoA);
    if (!s.automated.empty() && s.human.size() >= 2) add(s.automated[0], s.human[1], kPairAutoB);
  };

  const std::size_t workers =
      std::min<std::size_t>(jobs.size(), static_cast<std::size_t>(std::max(1, options.parallelism)));
  if (workers <= 1) {
    for (auto& job : jobs) run(job);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> failures(jobs.size());
    {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          for (std::size_t i = next++; i < jobs.size(); i = next++) {
            try {
              run(jobs[i]);
            } catch (...) {
              failures[i] = std::current_exception();
            }
          }
        });
      }
    }
    for (auto& f : failures) {
      if (f) std::rethrow_exception(f);
    }
  }

  std::vector<ComparisonReport> reports;
  for (auto& job : jobs) {
    for (auto& r : job.out) reports.push_back(std::move(r));
  }
  return reports;
}

nlohmann::json report_document(const std::vector<ComparisonReport>& reports, const AggregateSummary& summary) {
  nlohmann::json sessions = nlohmann::json::array();
  for (const auto& r : reports) sessions.push_back(to_json(r));
  return {{"sessions", sessions},
          {"summary", to_json(summary)},
          {"metadata",
           {{"sd_convention", "sample (n-1) standard deviation over sessions; null for a single session"},
            {"missing_values", "metrics that failed for a session are excluded from that cell's statistics"},
            {"pairs", "A and B are the human graphs ordered by annotator id; Auto is the automated graph"}}}};
}

}  // namespace casegraph
