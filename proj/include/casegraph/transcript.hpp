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

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace casegraph {

enum class Speaker { kTherapist, kPatient };

std::string_view to_string(Speaker speaker);

struct Turn {
  int index = 0;
  Speaker speaker = Speaker::kTherapist;
  std::string text;
};

struct Transcript {
  std::string session_id;
  std::vector<Turn> turns;
};

// Accepts two layouts.
//
// Plain text: a line starting with "Therapist:" or "Patient:" (any case)
// opens a turn; following lines are continuation text joined with single
// spaces. A line whose first token is a lone alphabetic word followed by ':'
// is read as a speaker label, so "Counselor: ..." is rejected rather than
// folded into the previous turn. Blank lines are ignored.
//
// Structured: a JSON array of {"speaker", "text"} objects. Wins whenever the
// document parses as one.
//
// Throws NoTurnsFound or UnknownSpeakerLabel (with 1-based line number, or
// entry number for the structured form).
Transcript parse_transcript(std::string_view document, std::string session_id);

// "Therapist: ...\nPatient: ...\n", one line per turn.
std::string render_conversation(const Transcript& transcript);

struct CorpusStats {
  std::size_t session_count = 0;
  double mean_words_per_session = 0;
  double mean_sentences_per_session = 0;
  double mean_therapist_turns = 0;
  double mean_patient_turns = 0;
  double mean_utterance_length_words = 0;
};

// Whitespace-delimited tokens.
std::size_t count_words(std::string_view text);
// Maximal runs of '.', '!' or '?'.
std::size_t count_sentences(std::string_view text);

// Throws EmptyCorpus.
CorpusStats corpus_stats(std::span<const Transcript> transcripts);

nlohmann::json to_json(const CorpusStats& stats);

}  // namespace casegraph
