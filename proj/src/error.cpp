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

#include "casegraph/error.hpp"

namespace casegraph {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDuplicateNodeId: return "DuplicateNodeId";
    case ErrorCode::kSelfLoop: return "SelfLoop";
    case ErrorCode::kDuplicateEdge: return "DuplicateEdge";
    case ErrorCode::kDanglingEdgeEndpoint: return "DanglingEdgeEndpoint";
    case ErrorCode::kEmptyLabel: return "EmptyLabel";
    case ErrorCode::kMalformedDocument: return "MalformedDocument";
    case ErrorCode::kSchemaViolation: return "SchemaViolation";
    case ErrorCode::kUnknownNode: return "UnknownNode";
    case ErrorCode::kUnknownEdge: return "UnknownEdge";
    case ErrorCode::kNoTurnsFound: return "NoTurnsFound";
    case ErrorCode::kUnknownSpeakerLabel: return "UnknownSpeakerLabel";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kInvalidTranscript: return "InvalidTranscript";
    case ErrorCode::kNoParsablePayload: return "NoParsablePayload";
    case ErrorCode::kWrongPayloadShape: return "WrongPayloadShape";
    case ErrorCode::kUnparsableVerdict: return "UnparsableVerdict";
    case ErrorCode::kBackendUnavailable: return "BackendUnavailable";
    case ErrorCode::kExtractionFailed: return "ExtractionFailed";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kEmptyGraph: return "EmptyGraph";
    case ErrorCode::kEdgelessGraph: return "EdgelessGraph";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kZeroMeanVector: return "ZeroMeanVector";
    case ErrorCode::kTooFewNodes: return "TooFewNodes";
    case ErrorCode::kNoEdges: return "NoEdges";
    case ErrorCode::kZeroVariance: return "ZeroVariance";
    case ErrorCode::kPartitionMismatch: return "PartitionMismatch";
    case ErrorCode::kUnknownText: return "UnknownText";
    case ErrorCode::kDegenerateExpectedAgreement: return "DegenerateExpectedAgreement";
    case ErrorCode::kInvalidMatrix: return "InvalidMatrix";
    case ErrorCode::kMissingRating: return "MissingRating";
    case ErrorCode::kInvalidScores: return "InvalidScores";
    case ErrorCode::kEmptyScores: return "EmptyScores";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

}  // namespace casegraph
