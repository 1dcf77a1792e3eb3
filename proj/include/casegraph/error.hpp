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

#include <stdexcept>
#include <string>
#include <string_view>

namespace casegraph {

// Every domain failure in the library is reported as an Error carrying one
// of these codes. The message names the offending element.
enum class ErrorCode {
  // graph model
  kDuplicateNodeId,
  kSelfLoop,
  kDuplicateEdge,
  kDanglingEdgeEndpoint,
  kEmptyLabel,
  kMalformedDocument,
  kSchemaViolation,
  kUnknownNode,
  kUnknownEdge,
  // transcripts
  kNoTurnsFound,
  kUnknownSpeakerLabel,
  kEmptyCorpus,
  kInvalidTranscript,
  // generation pipeline
  kNoParsablePayload,
  kWrongPayloadShape,
  kUnparsableVerdict,
  kBackendUnavailable,
  kExtractionFailed,
  kInvalidConfig,
  // metrics
  kEmptyGraph,
  kEdgelessGraph,
  kLengthMismatch,
  kZeroMeanVector,
  kTooFewNodes,
  kNoEdges,
  kZeroVariance,
  kPartitionMismatch,
  kUnknownText,
  // agreement
  kDegenerateExpectedAgreement,
  kInvalidMatrix,
  kMissingRating,
  kInvalidScores,
  kEmptyScores,
  // reporting
  kEmptyInput,
  kIo,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace casegraph
