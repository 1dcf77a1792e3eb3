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

#include "casegraph/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "casegraph/agreement.hpp"
#include "casegraph/community.hpp"
#include "casegraph/error.hpp"
#include "casegraph/graph_io.hpp"
#include "casegraph/pipeline.hpp"
#include "casegraph/report.hpp"
#include "casegraph/topology.hpp"
#include "casegraph/transcript.hpp"
#include "casegraph/warning_log.hpp"

namespace casegraph {

namespace {

bool starts_with(const std::string& s, std::string_view prefix) { return s.rfind(prefix, 0) == 0; }

nlohmann::json load_json_file(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  auto doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::kInvalidConfig, path.string() + " is not valid JSON");
  return doc;
}

// Caching wrapper that owns the provider it wraps.
class OwningCache : public EmbeddingProvider {
 public:
  explicit OwningCache(std::unique_ptr<EmbeddingProvider> inner) : inner_(std::move(inner)), cache_(*inner_) {}
  Embedding embed(std::string_view text) override { return cache_.embed(text); }
  std::size_t dimension() const override { return cache_.dimension(); }

 private:
  std::unique_ptr<EmbeddingProvider> inner_;
  CachingEmbeddingProvider cache_;
};

}  // namespace

std::unique_ptr<EmbeddingProvider> make_embedder(const std::string& spec) {
  if (spec == "mock") return std::make_unique<HashEmbeddingProvider>();
  if (starts_with(spec, "mock:")) {
    const std::string dim = spec.substr(5);
    char* end = nullptr;
    const unsigned long value = std::strtoul(dim.c_str(), &end, 10);
    if (dim.empty() || *end != '\0' || value == 0) {
      throw Error(ErrorCode::kInvalidConfig, "bad mock embedder dimension '" + dim + "'");
    }
    return std::make_unique<HashEmbeddingProvider>(value);
  }
  if (starts_with(spec, "table:")) {
    return std::make_unique<TableEmbeddingProvider>(TableEmbeddingProvider::from_file(spec.substr(6)));
  }
  if (spec.empty()) throw Error(ErrorCode::kInvalidConfig, "no embedder configured");
  const nlohmann::json doc = load_json_file(spec);
  if (!doc.is_object()) throw Error(ErrorCode::kInvalidConfig, "embedder config must be a JSON object");
  EmbeddingEndpointConfig cfg;
  cfg.endpoint = doc.value("endpoint", std::string());
  cfg.model_name = doc.value("model_name", std::string());
  cfg.api_key_env_var = doc.value("api_key_env_var", cfg.api_key_env_var);
  if (doc.contains("request_timeout")) {
    if (!doc["request_timeout"].is_number() || doc["request_timeout"].get<double>() <= 0) {
      throw Error(ErrorCode::kInvalidConfig, "request_timeout must be a positive number of seconds");
    }
    cfg.request_timeout =
        std::chrono::milliseconds(static_cast<long long>(doc["request_timeout"].get<double>() * 1000.0));
  }
  return std::make_unique<OwningCache>(std::make_unique<HttpEmbeddingProvider>(cfg));
}

BackendHandle make_backend(const std::string& spec) {
  BackendHandle h;
  if (starts_with(spec, "mock:")) {
    std::filesystem::path fixture = spec.substr(5);
    if (!std::filesystem::exists(fixture)) fixture += ".json";
    // Direct-initialization from the prvalue elides the (deleted) move.
    h.backend.reset(new ScriptedBackend(ScriptedBackend::from_file(fixture)));
    h.config.model_name = "mock";
    return h;
  }
  if (spec.empty()) throw Error(ErrorCode::kInvalidConfig, "no backend configured");
  h.config = backend_config_from_json(load_json_file(spec));
  h.backend = std::make_unique<HttpChatBackend>(h.config);
  return h;
}

namespace {

struct Settings {
  std::optional<nlohmann::json> config;

  // flag > config file key > environment variable.
  std::string resolve(const std::string& flag, const char* key, const char* env) const {
    if (!flag.empty()) return flag;
    if (config && config->contains(key) && (*config)[key].is_string()) return (*config)[key].get<std::string>();
    if (const char* v = std::getenv(env); v != nullptr) return v;
    return {};
  }

  template <typename T>
  std::optional<T> config_value(const char* key) const {
    if (!config || !config->contains(key)) return std::nullopt;
    try {
      return (*config)[key].get<T>();
    } catch (const nlohmann::json::exception&) {
      throw Error(ErrorCode::kInvalidConfig, std::string("config key '") + key + "' has the wrong type");
    }
  }
};

std::string dump(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

void emit(const std::string& document, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << document;
  } else {
    write_file(out_path, document);
  }
}

std::string stem_of(const std::string& path) { return std::filesystem::path(path).stem().string(); }

Transcript load_transcript(const std::string& path, const std::string& session_id) {
  return parse_transcript(read_file(path), session_id.empty() ? stem_of(path) : session_id);
}

void drain(const WarningLog& log, std::ostream& err) {
  for (const auto& w : log.entries()) err << WarningLog::to_json(w).dump() << "\n";
}

void report_error(std::ostream& err, std::string_view code, std::string_view message) {
  err << nlohmann::json{{"level", "error"}, {"code", code}, {"message", message}}.dump() << "\n";
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Causal case-formulation graphs: generation, comparison and analysis.", "casegraph"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "JSON file with default backend, embedder, parallelism and seed");

  std::string out_path;
  std::function<void()> action;
  Settings settings;
  WarningLog log;

  // generate
  struct {
    std::string transcript, backend, session_id;
    bool include_within = false;
    int parallelism = 0;
  } gen;
  auto* generate = app.add_subcommand("generate", "Build a causal graph from a transcript");
  generate->add_option("--transcript", gen.transcript, "Transcript file (plain text or JSON turns)")->required();
  generate->add_option("--backend", gen.backend, "mock:<fixture> or backend config JSON");
  generate->add_flag("--include-within-category", gen.include_within, "Also query same-category pairs");
  generate->add_option("--parallelism", gen.parallelism, "Concurrent verification calls")
      ->check(CLI::PositiveNumber);
  generate->add_option("--session-id", gen.session_id, "Defaults to the transcript file stem");
  generate->add_option("--out", out_path, "Output graph JSON");
  generate->callback([&] {
    action = [&] {
      BackendHandle h = make_backend(settings.resolve(gen.backend, "backend", kBackendEnvVar));
      if (gen.parallelism > 0) {
        h.config.parallelism = gen.parallelism;
      } else if (auto p = settings.config_value<int>("parallelism")) {
        h.config.parallelism = *p;
      }
      h.config.validate();
      const Transcript t = load_transcript(gen.transcript, gen.session_id);
      emit(serialize(generate_graph(t, *h.backend, h.config, gen.include_within, &log)), out_path, out);
    };
  });

  // compare
  struct {
    std::string a, b, embedder, edge_template = kDefaultEdgeTemplate, pair_label;
    std::size_t top_k = kDefaultTopK;
  } cmp;
  auto* compare_cmd = app.add_subcommand("compare", "Compare two graphs");
  compare_cmd->add_option("--graph-a", cmp.a, "First graph JSON")->required();
  compare_cmd->add_option("--graph-b", cmp.b, "Second graph JSON")->required();
  compare_cmd->add_option("--embedder", cmp.embedder, "mock, mock:<dim>, table:<path> or embedder config JSON");
  compare_cmd->add_option("--edge-template", cmp.edge_template, "Edge verbalization template");
  compare_cmd->add_option("--top-k", cmp.top_k, "Prominent nodes per graph")->check(CLI::PositiveNumber);
  compare_cmd->add_option("--pair-label", cmp.pair_label, "Label stored in the report");
  compare_cmd->add_option("--out", out_path, "Output report JSON");
  compare_cmd->callback([&] {
    action = [&] {
      std::string spec = settings.resolve(cmp.embedder, "embedder", kEmbedderEnvVar);
      auto provider = make_embedder(spec.empty() ? "mock" : spec);
      SemanticOptions options{cmp.edge_template, cmp.top_k};
      const ComparisonReport r =
          compare(load_graph(cmp.a), load_graph(cmp.b), *provider, options, cmp.pair_label);
      emit(dump(to_json(r)), out_path, out);
    };
  });

  // metrics
  std::string metrics_graph, metrics_reference;
  auto* metrics = app.add_subcommand("metrics", "Topology, clustering and centrality statistics");
  metrics->add_option("--graph", metrics_graph, "Graph JSON")->required();
  metrics->add_option("--reference", metrics_reference, "Graph to compare degree distributions against");
  metrics->add_option("--out", out_path, "Output metrics JSON");
  metrics->callback([&] {
    action = [&] {
      const CausalGraph g = load_graph(metrics_graph);
      const MetricsReport report = compute_metrics(g);
      nlohmann::json doc = to_json(report, g);
      if (!metrics_reference.empty()) {
        const CausalGraph ref = load_graph(metrics_reference);
        const DegreeHistogram q = degree_distribution(ref);
        doc["reference"] = {{"session_id", ref.session_id()},
                            {"kl_divergence", kl_divergence(report.degree_histogram, q)},
                            {"emd", emd_1d(report.degree_histogram, q)}};
      }
      emit(dump(doc), out_path, out);
    };
  });

  // communities
  struct {
    std::string graph, algo;
    std::optional<std::uint64_t> seed;
    double resolution = 1.0;
  } com;
  auto* communities = app.add_subcommand("communities", "Community detection");
  communities->add_option("--graph", com.graph, "Graph JSON")->required();
  communities->add_option("--algo", com.algo, "leiden|girvan-newman|infomap|label-propagation")
      ->required()
      ->check(CLI::IsMember({"leiden", "girvan-newman", "infomap", "label-propagation"}));
  communities->add_option("--seed", com.seed, "Random seed (default 42)");
  communities->add_option("--resolution", com.resolution, "Leiden resolution")->check(CLI::PositiveNumber);
  communities->add_option("--out", out_path, "Output partition JSON");
  communities->callback([&] {
    action = [&] {
      const CausalGraph g = load_graph(com.graph);
      const CommunityAlgorithm algo = *parse_algorithm(com.algo);
      const std::uint64_t seed =
          com.seed.value_or(settings.config_value<std::uint64_t>("seed").value_or(kDefaultSeed));
      const Partition p = detect_communities(g, algo, com.resolution, seed);
      emit(dump(partition_document(g, p, algo, com.resolution, seed)), out_path, out);
    };
  });

  // agreement
  std::string ratings;
  auto* agreement = app.add_subcommand("agreement", "Fleiss' kappa and rubric score summary");
  agreement->add_option("--ratings", ratings, "CSV: rater_id,session_id,dimension,score")->required();
  agreement->add_option("--out", out_path, "Output JSON");
  agreement->callback([&] {
    action = [&] { emit(dump(agreement_document(RubricScores::parse_csv(read_file(ratings)))), out_path, out); };
  });

  // stats
  std::vector<std::string> stats_files;
  auto* stats = app.add_subcommand("stats", "Corpus statistics for transcripts");
  stats->add_option("--transcript", stats_files, "Transcript file(s)")->required()->expected(1, -1);
  stats->add_option("--out", out_path, "Output JSON");
  stats->callback([&] {
    action = [&] {
      std::vector<Transcript> ts;
      for (const auto& f : stats_files) ts.push_back(load_transcript(f, ""));
      emit(dump(to_json(corpus_stats(ts))), out_path, out);
    };
  });

  // export
  std::string export_graph_path, export_format;
  auto* export_cmd = app.add_subcommand("export", "Write a graph as DOT or GraphML");
  export_cmd->add_option("--graph", export_graph_path, "Graph JSON")->required();
  export_cmd->add_option("--format", export_format, "dot|graphml")
      ->required()
      ->check(CLI::IsMember({"dot", "graphml"}));
  export_cmd->add_option("--out", out_path, "Output file");
  export_cmd->callback([&] {
    action = [&] {
      const auto format = export_format == "dot" ? ExportFormat::kDot : ExportFormat::kGraphMl;
      emit(export_graph(load_graph(export_graph_path), format), out_path, out);
    };
  });

  // report
  struct {
    std::string dir, embedder, edge_template = kDefaultEdgeTemplate;
    std::size_t top_k = kDefaultTopK;
    int parallelism = 0;
    bool table = false;
  } rep;
  auto* report = app.add_subcommand("report", "Compare every session in a directory and aggregate");
  report->add_option("--dir", rep.dir, "Directory of graph JSON files (optional groups.csv)")->required();
  report->add_option("--embedder", rep.embedder, "mock, mock:<dim>, table:<path> or embedder config JSON");
  report->add_option("--edge-template", rep.edge_template, "Edge verbalization template");
  report->add_option("--top-k", rep.top_k, "Prominent nodes per graph")->check(CLI::PositiveNumber);
  report->add_option("--parallelism", rep.parallelism, "Sessions compared concurrently")->check(CLI::PositiveNumber);
  report->add_flag("--table", rep.table, "Also print a human-readable table to stdout");
  report->add_option("--out", out_path, "Output report JSON");
  report->callback([&] {
    action = [&] {
      std::string spec = settings.resolve(rep.embedder, "embedder", kEmbedderEnvVar);
      auto provider = make_embedder(spec.empty() ? "mock" : spec);
      ReportOptions options;
      options.semantic = {rep.edge_template, rep.top_k};
      options.parallelism = rep.parallelism > 0 ? rep.parallelism
                                                : settings.config_value<int>("parallelism").value_or(1);
      const auto reports = compare_directory(rep.dir, *provider, options, &log);
      const AggregateSummary summary = aggregate(reports);
      const std::string doc = dump(report_document(reports, summary));
      if (rep.table) {
        if (!out_path.empty()) write_file(out_path, doc);
        out << render_table(summary);
      } else {
        emit(doc, out_path, out);
      }
    };
  });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    report_error(err, "UsageError", e.what());
    return kExitUsageError;
  }

  int status = kExitOk;
  try {
    if (!config_path.empty()) {
      settings.config = load_json_file(config_path);
      if (!settings.config->is_object()) throw Error(ErrorCode::kInvalidConfig, "config must be a JSON object");
    }
    if (action) action();
  } catch (const Error& e) {
    report_error(err, to_string(e.code()), e.what());
    status = kExitDomainError;
  } catch (const TransportError& e) {
    report_error(err, to_string(ErrorCode::kBackendUnavailable), e.what());
    status = kExitDomainError;
  } catch (const nlohmann::json::exception& e) {
    report_error(err, to_string(ErrorCode::kMalformedDocument), e.what());
    status = kExitDomainError;
  } catch (const std::exception& e) {
    report_error(err, "InternalError", e.what());
    status = kExitDomainError;
  }
  drain(log, err);
  return status;
}

}  // namespace casegraph
