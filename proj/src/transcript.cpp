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

#include "casegraph/transcript.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

#include "casegraph/error.hpp"

namespace casegraph {

std::string_view to_string(Speaker speaker) {
  return speaker == Speaker::kTherapist ? "Therapist" : "Patient";
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::optional<Speaker> speaker_from_name(std::string_view name) {
  const std::string n = lower(trim(name));
  if (n == "therapist") return Speaker::kTherapist;
  if (n == "patient") return Speaker::kPatient;
  return std::nullopt;
}

struct LabelLine {
  std::string_view label;
  std::string_view rest;
};

// A label is a single alphabetic word at the start of the line, followed by
// ':' and then whitespace or end of line.
std::optional<LabelLine> split_label(std::string_view line) {
  std::string_view s = trim(line);
  std::size_t i = 0;
  while (i < s.size() && std::isalpha(static_cast<unsigned char>(s[i]))) ++i;
  if (i < 2 || i >= s.size() || s[i] != ':') return std::nullopt;
  const bool known = speaker_from_name(s.substr(0, i)).has_value();
  if (!known && i + 1 < s.size() && !std::isspace(static_cast<unsigned char>(s[i + 1]))) {
    return std::nullopt;
  }
  return LabelLine{s.substr(0, i), trim(s.substr(i + 1))};
}

void append_text(std::string& text, std::string_view piece) {
  if (piece.empty()) return;
  if (!text.empty()) text.push_back(' ');
  text.append(piece);
}

std::optional<Transcript> parse_structured(std::string_view document, std::string& session_id) {
  nlohmann::json doc = nlohmann::json::parse(document.begin(), document.end(), nullptr, false);
  if (doc.is_discarded() || !doc.is_array()) return std::nullopt;
  for (const auto& entry : doc) {
    if (!entry.is_object() || !entry.contains("speaker") || !entry.contains("text") ||
        !entry["speaker"].is_string() || !entry["text"].is_string()) {
      return std::nullopt;
    }
  }
  Transcript t;
  t.session_id = std::move(session_id);
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const std::string name = doc[i]["speaker"].get<std::string>();
    auto speaker = speaker_from_name(name);
    if (!speaker) {
      throw Error(ErrorCode::kUnknownSpeakerLabel,
                  "entry " + std::to_string(i + 1) + ": '" + name + "'");
    }
    std::string text(trim(doc[i]["text"].get<std::string>()));
    if (text.empty()) continue;
    t.turns.push_back(Turn{static_cast<int>(t.turns.size()), *speaker, std::move(text)});
  }
  return t;
}

}  // namespace

Transcript parse_transcript(std::string_view document, std::string session_id) {
  if (auto structured = parse_structured(document, session_id)) {
    if (structured->turns.empty()) throw Error(ErrorCode::kNoTurnsFound, "structured transcript is empty");
    return *std::move(structured);
  }

  Transcript t;
  t.session_id = std::move(session_id);
  std::optional<Turn> current;
  auto flush = [&] {
    if (current && !current->text.empty()) {
      current->index = static_cast<int>(t.turns.size());
      t.turns.push_back(std::move(*current));
    }
    current.reset();
  };

  std::size_t line_no = 0, orphan_line = 0;
  std::size_t pos = 0;
  while (pos <= document.size()) {
    std::size_t end = document.find('\n', pos);
    if (end == std::string_view::npos) end = document.size();
    std::string_view line = document.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = end + 1;
    ++line_no;

    if (trim(line).empty()) continue;
    if (auto labelled = split_label(line)) {
      auto speaker = speaker_from_name(labelled->label);
      if (!speaker) {
        throw Error(ErrorCode::kUnknownSpeakerLabel,
                    "line " + std::to_string(line_no) + ": '" + std::string(labelled->label) + "'");
      }
      flush();
      current = Turn{0, *speaker, std::string(labelled->rest)};
      continue;
    }
    if (!current) {
      // Reported after the scan: a document with no labels at all is NoTurnsFound.
      if (orphan_line == 0) orphan_line = line_no;
      continue;
    }
    append_text(current->text, trim(line));
  }
  flush();
  if (t.turns.empty()) throw Error(ErrorCode::kNoTurnsFound, "no labelled turns in document");
  if (orphan_line != 0) {
    throw Error(ErrorCode::kUnknownSpeakerLabel,
                "line " + std::to_string(orphan_line) + ": text before any speaker label");
  }
  return t;
}

std::string render_conversation(const Transcript& transcript) {
  std::string out;
  for (const auto& turn : transcript.turns) {
    out.append(to_string(turn.speaker));
    out.append(": ");
    out.append(turn.text);
    out.push_back('\n');
  }
  return out;
}

std::size_t count_words(std::string_view text) {
  std::size_t words = 0;
  bool in_word = false;
  for (unsigned char c : text) {
    const bool space = std::isspace(c) != 0;
    if (!space && !in_word) ++words;
    in_word = !space;
  }
  return words;
}

std::size_t count_sentences(std::string_view text) {
  std::size_t runs = 0;
  bool in_run = false;
  for (char c : text) {
    const bool terminal = c == '.' || c == '!' || c == '?';
    if (terminal && !in_run) ++runs;
    in_run = terminal;
  }
  return runs;
}

CorpusStats corpus_stats(std::span<const Transcript> transcripts) {
  if (transcripts.empty()) throw Error(ErrorCode::kEmptyCorpus, "no transcripts given");
  std::size_t words = 0, sentences = 0, therapist = 0, patient = 0;
  for (const auto& t : transcripts) {
    for (const auto& turn : t.turns) {
      words += count_words(turn.text);
      sentences += count_sentences(turn.text);
      (turn.speaker == Speaker::kTherapist ? therapist : patient) += 1;
    }
  }
  const auto sessions = static_cast<double>(transcripts.size());
  const std::size_t turns = therapist + patient;
  CorpusStats s;
  s.session_count = transcripts.size();
  s.mean_words_per_session = static_cast<double>(words) / sessions;
  s.mean_sentences_per_session = static_cast<double>(sentences) / sessions;
  s.mean_therapist_turns = static_cast<double>(therapist) / sessions;
  s.mean_patient_turns = static_cast<double>(patient) / sessions;
  s.mean_utterance_length_words = turns == 0 ? 0.0 : static_cast<double>(words) / static_cast<double>(turns);
  return s;
}

nlohmann::json to_json(const CorpusStats& stats) {
  return {{"session_count", stats.session_count},
          {"mean_words_per_session", stats.mean_words_per_session},
          {"mean_sentences_per_session", stats.mean_sentences_per_session},
          {"mean_therapist_turns", stats.mean_therapist_turns},
          {"mean_patient_turns", stats.mean_patient_turns},
          {"mean_utterance_length_words", stats.mean_utterance_length_words},
          {"definitions",
           {{"word", "maximal run of non-whitespace characters"},
            {"sentence", "maximal run of characters ending in '.', '!' or '?' (counted per run of terminal punctuation)"}}}};
}

}  // namespace casegraph
