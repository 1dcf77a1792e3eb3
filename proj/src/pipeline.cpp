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

#include "casegraph/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <condition_variable>
#include <deque>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "casegraph/error.hpp"

namespace casegraph {

using nlohmann::json;

namespace {

constexpr std::string_view kPersona =
    "You are a clinical psychologist preparing a 5P case formulation from a therapy intake "
    "session.\n";

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::string_view category_phrase(FactorCategory c) {
  switch (c) {
    case FactorCategory::kPresenting: return "presenting problem";
    case FactorCategory::kPredisposing: return "predisposing factor";
    case FactorCategory::kPrecipitating: return "precipitating factor";
    case FactorCategory::kPerpetuating: return "perpetuating factor";
    case FactorCategory::kProtective: return "protective factor";
  }
  return "factor";
}

void conversation_block(std::ostringstream& os, const Transcript& t) {
  os << "Conversation:\n<<<\n" << render_conversation(t) << ">>>\n";
}

// End of the balanced object starting at text[open], honouring JSON strings.
std::optional<std::size_t> matching_brace(std::string_view text, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (std::size_t i = open; i < text.size(); ++i) {
    const char c = text[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}') {
      if (--depth == 0) return i;
    }
  }
  return std::nullopt;
}

std::vector<std::string> phrase_list(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_array()) {
    throw Error(ErrorCode::kWrongPayloadShape, std::string("'") + key + "' is not a list");
  }
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& v : *it) {
    if (!v.is_string()) {
      throw Error(ErrorCode::kWrongPayloadShape, std::string("'") + key + "' holds a non-string entry");
    }
    std::string phrase = trim(v.get<std::string>());
    if (phrase.empty()) continue;
    if (seen.insert(lower(phrase)).second) out.push_back(std::move(phrase));
  }
  return out;
}

std::optional<bool> verdict_token(const json& v) {
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_string()) {
    const std::string s = lower(trim(v.get<std::string>()));
    if (s == "true") return true;
    if (s == "false") return false;
  }
  return std::nullopt;
}

std::vector<int> supporting_turns(const Transcript& t, std::string_view label) {
  const std::string needle = lower(label);
  std::vector<int> turns;
  for (const auto& turn : t.turns) {
    if (lower(turn.text).find(needle) != std::string::npos) turns.push_back(turn.index);
  }
  return turns;
}

void require_turns(const Transcript& t) {
  if (t.turns.empty()) {
    throw Error(ErrorCode::kInvalidTranscript, "session '" + t.session_id + "' has no turns");
  }
}

}  // namespace

std::optional<json> find_json_object(std::string_view text) {
  for (std::size_t open = text.find('{'); open != std::string_view::npos;
       open = text.find('{', open + 1)) {
    auto close = matching_brace(text, open);
    if (!close) continue;
    std::string_view candidate = text.substr(open, *close - open + 1);
    json doc = json::parse(candidate.begin(), candidate.end(), nullptr, false);
    if (!doc.is_discarded() && doc.is_object()) return doc;
  }
  return std::nullopt;
}

std::string build_extraction_prompt(const Transcript& transcript) {
  std::ostringstream os;
  os << kPersona
     << "Identify the patient's presenting problems, predisposing factors, precipitating "
        "factors, and perpetuating factors from the conversation below.\n\n"
     << "- " << kPresentingKey << ": current symptoms or difficulties the patient reports.\n"
     << "- " << kPredisposingKey << ": long-standing vulnerabilities that made the patient susceptible.\n"
     << "- " << kPrecipitatingKey << ": recent events or stressors tied to the onset of the problems.\n"
     << "- " << kPerpetuatingKey << ": ongoing behaviours or conditions that keep the problems going.\n\n"
     << "List every factor once, as a short phrase, using the conversation's own wording where "
        "possible.\n"
     << "Respond in JSON format with exactly these four keys, each mapping to a list of strings:\n"
     << "{\"" << kPresentingKey << "\": [], \"" << kPredisposingKey << "\": [], \""
     << kPrecipitatingKey << "\": [], \"" << kPerpetuatingKey << "\": []}\n\n";
  conversation_block(os, transcript);
  return os.str();
}

ExtractionResult parse_extraction_response(std::string_view response) {
  auto payload = find_json_object(response);
  if (!payload) throw Error(ErrorCode::kNoParsablePayload, "no JSON object in extraction response");
  ExtractionResult r;
  r.presenting = phrase_list(*payload, kPresentingKey);
  r.predisposing = phrase_list(*payload, kPredisposingKey);
  r.precipitating = phrase_list(*payload, kPrecipitatingKey);
  r.perpetuating = phrase_list(*payload, kPerpetuatingKey);
  return r;
}

std::vector<std::pair<FactorNode, FactorNode>> enumerate_candidate_pairs(
    const std::vector<FactorNode>& nodes, bool include_within_category) {
  std::vector<const FactorNode*> sorted;
  for (const auto& n : nodes) sorted.push_back(&n);
  std::sort(sorted.begin(), sorted.end(),
            [](const FactorNode* a, const FactorNode* b) { return a->id < b->id; });
  std::vector<std::pair<FactorNode, FactorNode>> pairs;
  for (const FactorNode* u : sorted) {
    for (const FactorNode* v : sorted) {
      if (u->id == v->id) continue;
      if (!include_within_category && u->category == v->category) continue;
      pairs.emplace_back(*u, *v);
    }
  }
  return pairs;
}

std::string build_edge_prompt(const EdgeQuery& query, const Transcript& transcript,
                              std::vector<std::pair<std::string, std::string>> known_edges) {
  std::sort(known_edges.begin(), known_edges.end());
  std::ostringstream os;
  os << kPersona
     << "Using the full conversation below, decide whether the first factor causes the second.\n\n"
     << "First factor (cause): \"" << query.source.label << "\" [" << category_phrase(query.source.category)
     << "]\n"
     << "Second factor (effect): \"" << query.target.label << "\" ["
     << category_phrase(query.target.category) << "]\n\n"
     << "Causal links accepted so far:\n";
  if (known_edges.empty()) {
    os << "- none so far\n";
  } else {
    for (const auto& [cause, effect] : known_edges) {
      os << "- \"" << cause << "\" causes \"" << effect << "\"\n";
    }
  }
  os << "\n";
  conversation_block(os, transcript);
  os << "\nAnswer TRUE only if the conversation supports that the first factor causes the "
        "second; otherwise answer FALSE.\n"
     << "Respond in JSON format: {\"answer\": \"TRUE\"} or {\"answer\": \"FALSE\"}\n";
  return os.str();
}

bool parse_edge_response(std::string_view response) {
  auto payload = find_json_object(response);
  if (!payload) throw Error(ErrorCode::kUnparsableVerdict, "no JSON object in verdict response");
  if (auto it = payload->find("answer"); it != payload->end()) {
    if (auto v = verdict_token(*it)) return *v;
    throw Error(ErrorCode::kUnparsableVerdict, "answer is neither TRUE nor FALSE: " + it->dump());
  }
  for (const auto& [key, value] : payload->items()) {
    if (auto v = verdict_token(value)) return *v;
  }
  throw Error(ErrorCode::kUnparsableVerdict, "no TRUE/FALSE token in " + payload->dump());
}

std::vector<FactorNode> extract_nodes(const Transcript& transcript, ChatBackend& backend,
                                      const BackendConfig& cfg, WarningLog* log) {
  require_turns(transcript);
  cfg.validate();
  const std::string prompt = build_extraction_prompt(transcript);

  std::optional<ExtractionResult> result;
  bool any_response = false;
  std::string last_problem;
  for (int attempt = 0; attempt <= cfg.max_retries && !result; ++attempt) {
    std::string response;
    try {
      response = backend.complete(prompt);
    } catch (const TransportError& e) {
      last_problem = e.what();
      if (log) log->warn("BackendRetry", "extraction attempt " + std::to_string(attempt + 1) + ": " + e.what());
      continue;
    }
    any_response = true;
    try {
      ExtractionResult parsed = parse_extraction_response(response);
      if (parsed.size() == 0) {
        last_problem = "extraction payload lists no factors";
        if (log) log->warn("EmptyExtraction", "attempt " + std::to_string(attempt + 1) + ": " + last_problem);
        continue;
      }
      result = std::move(parsed);
    } catch (const Error& e) {
      last_problem = e.what();
      if (log) log->warn("ExtractionRetry", "attempt " + std::to_string(attempt + 1) + ": " + e.what());
    }
  }
  if (!result) {
    const int attempts = cfg.max_retries + 1;
    if (!any_response) {
      throw Error(ErrorCode::kBackendUnavailable,
                  "extraction failed at transport level after " + std::to_string(attempts) +
                      " attempts: " + last_problem);
    }
    throw Error(ErrorCode::kExtractionFailed,
                "no usable extraction after " + std::to_string(attempts) + " attempts: " + last_problem);
  }

  const std::pair<FactorCategory, const std::vector<std::string>*> groups[] = {
      {FactorCategory::kPresenting, &result->presenting},
      {FactorCategory::kPredisposing, &result->predisposing},
      {FactorCategory::kPrecipitating, &result->precipitating},
      {FactorCategory::kPerpetuating, &result->perpetuating},
  };
  std::map<std::string, FactorCategory> claimed;
  std::set<std::string> taken_ids;
  std::vector<FactorNode> nodes;
  for (const auto& [category, phrases] : groups) {
    for (const auto& phrase : *phrases) {
      const std::string key = lower(phrase);
      if (auto it = claimed.find(key); it != claimed.end()) {
        if (log) {
          log->warn("DuplicateFactor", "'" + phrase + "' listed as " + std::string(to_string(category)) +
                                           " and " + std::string(to_string(it->second)) + "; keeping " +
                                           std::string(to_string(it->second)));
        }
        continue;
      }
      claimed.emplace(key, category);
      FactorNode n;
      n.id = unique_node_id(phrase, taken_ids);
      n.label = phrase;
      n.category = category;
      n.provenance = supporting_turns(transcript, phrase);
      nodes.push_back(std::move(n));
    }
  }
  std::sort(nodes.begin(), nodes.end(),
            [](const FactorNode& a, const FactorNode& b) { return a.id < b.id; });
  return nodes;
}

namespace {

struct PairOutcome {
  bool verdict = false;
  int attempts = 0;
  std::vector<Warning> warnings;
  std::exception_ptr error;
};

PairOutcome ask_pair(const std::pair<FactorNode, FactorNode>& pair, const Transcript& transcript,
                     const std::vector<std::pair<std::string, std::string>>& known,
                     ChatBackend& backend, const BackendConfig& cfg) {
  PairOutcome out;
  const std::string what = "'" + pair.first.label + "' -> '" + pair.second.label + "'";
  EdgeQuery query{pair.first, pair.second, std::nullopt, 0};
  const std::string prompt = build_edge_prompt(query, transcript, known);
  bool any_response = false;
  std::string last_problem;
  for (int attempt = 0; attempt <= cfg.max_retries; ++attempt) {
    ++out.attempts;
    std::string response;
    try {
      response = backend.complete(prompt);
    } catch (const TransportError& e) {
      last_problem = e.what();
      out.warnings.push_back({"BackendRetry", what + " attempt " + std::to_string(out.attempts) + ": " + e.what()});
      continue;
    }
    any_response = true;
    try {
      out.verdict = parse_edge_response(response);
      return out;
    } catch (const Error& e) {
      last_problem = e.what();
      out.warnings.push_back({"VerdictRetry", what + " attempt " + std::to_string(out.attempts) + ": " + e.what()});
    }
  }
  if (!any_response) {
    try {
      throw Error(ErrorCode::kBackendUnavailable,
                  "edge query " + what + " failed after " + std::to_string(out.attempts) +
                      " attempts: " + last_problem);
    } catch (...) {
      out.error = std::current_exception();
    }
    return out;
  }
  out.verdict = false;
  out.warnings.push_back({"VerdictDefaultFalse", what + ": no parsable verdict, treated as FALSE"});
  return out;
}

}  // namespace

std::vector<CausalEdge> verify_edges(const std::vector<FactorNode>& nodes,
                                     const Transcript& transcript, ChatBackend& backend,
                                     const BackendConfig& cfg, bool include_within_category,
                                     WarningLog* log, std::vector<EdgeQuery>* trace) {
  require_turns(transcript);
  cfg.validate();
  const auto pairs = enumerate_candidate_pairs(nodes, include_within_category);
  const std::size_t total = pairs.size();

  struct Slot {
    bool done = false;
    std::size_t basis = 0;  // commit position when the prompt was built
    PairOutcome outcome;
  };
  std::vector<Slot> slots(total);
  std::vector<std::size_t> accepted_before(total + 1, 0);
  std::vector<std::pair<std::string, std::string>> accepted_labels;
  std::vector<CausalEdge> edges;
  std::exception_ptr failure;

  std::mutex mu;
  std::condition_variable cv;
  std::size_t next_dispatch = 0;
  std::size_t next_commit = 0;
  std::deque<std::size_t> redo;

  // Commits finished slots in canonical order; a slot whose prompt missed an
  // edge accepted after it was dispatched goes back on the redo queue.
  auto commit_ready = [&] {
    while (next_commit < total && slots[next_commit].done && !failure) {
      Slot& slot = slots[next_commit];
      if (accepted_before[slot.basis] != accepted_before[next_commit]) {
        slot.done = false;
        redo.push_front(next_commit);
        break;
      }
      if (slot.outcome.error) {
        failure = slot.outcome.error;
        break;
      }
      if (log) {
        for (auto& w : slot.outcome.warnings) log->warn(w.code, w.message);
      }
      const auto& [source, target] = pairs[next_commit];
      if (slot.outcome.verdict) {
        accepted_labels.emplace_back(source.label, target.label);
        // Turns supporting either endpoint; build_graph sorts and dedups.
        std::vector<int> provenance = source.provenance;
        provenance.insert(provenance.end(), target.provenance.begin(), target.provenance.end());
        edges.push_back(CausalEdge{source.id, target.id, std::move(provenance)});
      }
      if (trace) trace->push_back(EdgeQuery{source, target, slot.outcome.verdict, slot.outcome.attempts});
      ++next_commit;
      accepted_before[next_commit] = accepted_labels.size();
    }
  };

  auto worker = [&] {
    std::unique_lock lock(mu);
    while (true) {
      cv.wait(lock, [&] {
        return failure || next_commit == total || !redo.empty() || next_dispatch < total;
      });
      if (failure || next_commit == total) return;
      std::size_t index;
      if (!redo.empty()) {
        index = redo.front();
        redo.pop_front();
      } else {
        index = next_dispatch++;
      }
      const std::size_t basis = next_commit;
      auto known = accepted_labels;
      lock.unlock();
      PairOutcome outcome = ask_pair(pairs[index], transcript, known, backend, cfg);
      lock.lock();
      slots[index].done = true;
      slots[index].basis = basis;
      slots[index].outcome = std::move(outcome);
      commit_ready();
      cv.notify_all();
    }
  };

  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(cfg.parallelism), total);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return edges;
}

CausalGraph generate_graph(const Transcript& transcript, ChatBackend& backend,
                           const BackendConfig& cfg, bool include_within_category, WarningLog* log) {
  require_turns(transcript);
  cfg.validate();
  auto nodes = extract_nodes(transcript, backend, cfg, log);
  auto edges = verify_edges(nodes, transcript, backend, cfg, include_within_category, log);
  std::optional<std::string> model;
  if (!cfg.model_name.empty()) model = cfg.model_name;
  return build_graph(transcript.session_id, std::move(nodes), std::move(edges),
                     GraphOrigin::kAutomated, std::move(model));
}

}  // namespace casegraph
