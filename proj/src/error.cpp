/* Copyright 2026 The layerens Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "layerens/error.hpp"

namespace layerens {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kOk: return "Ok";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kEmptyComponent: return "EmptyComponent";
    case ErrorCode::kReservedSeparatorInComponent: return "ReservedSeparatorInComponent";
    case ErrorCode::kDuplicateComponent: return "DuplicateComponent";
    case ErrorCode::kUnknownLabel: return "UnknownLabel";
    case ErrorCode::kDuplicateLabel: return "DuplicateLabel";
    case ErrorCode::kDuplicateExampleId: return "DuplicateExampleId";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kRowSumViolation: return "RowSumViolation";
    case ErrorCode::kNegativeProbability: return "NegativeProbability";
    case ErrorCode::kProbabilityOutOfRange: return "ProbabilityOutOfRange";
    case ErrorCode::kDatasetMismatch: return "DatasetMismatch";
    case ErrorCode::kDuplicateRunId: return "DuplicateRunId";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kEmptyVoteList: return "EmptyVoteList";
    case ErrorCode::kMissingRun: return "MissingRun";
    case ErrorCode::kMissingMemberVote: return "MissingMemberVote";
    case ErrorCode::kTooFewModels: return "TooFewModels";
    case ErrorCode::kNoMatchingEnsemble: return "NoMatchingEnsemble";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kEmptyConstituents: return "EmptyConstituents";
    case ErrorCode::kEmptyTrainSet: return "EmptyTrainSet";
    case ErrorCode::kDegenerateLabelSpace: return "DegenerateLabelSpace";
    case ErrorCode::kMissingFixture: return "MissingFixture";
    case ErrorCode::kInvalidIdentifier: return "InvalidIdentifier";
  }
  return "Unknown";
}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace layerens
