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

#ifndef LAYERENS_ERROR_HPP_
#define LAYERENS_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace layerens {

// Numeric values are part of the C ABI (see layerens.h); append only.
enum class ErrorCode : int {
  kOk = 0,
  kInvalidArgument = 1,
  kIoError = 2,
  kParseError = 3,
  kEmptyComponent = 4,
  kReservedSeparatorInComponent = 5,
  kDuplicateComponent = 6,
  kUnknownLabel = 7,
  kDuplicateLabel = 8,
  kDuplicateExampleId = 9,
  kShapeMismatch = 10,
  kRowSumViolation = 11,
  kNegativeProbability = 12,
  kProbabilityOutOfRange = 13,
  kDatasetMismatch = 14,
  kDuplicateRunId = 15,
  kIndexOutOfRange = 16,
  kEmptyVoteList = 17,
  kMissingRun = 18,
  kMissingMemberVote = 19,
  kTooFewModels = 20,
  kNoMatchingEnsemble = 21,
  kLengthMismatch = 22,
  kEmptyConstituents = 23,
  kEmptyTrainSet = 24,
  kDegenerateLabelSpace = 25,
  kMissingFixture = 26,
  kInvalidIdentifier = 27,
};

std::string_view error_code_name(ErrorCode code) noexcept;

// Every failure in the library surfaces as this exception. The C API
// translates it into a status code plus a thread-local message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace layerens

#endif  // LAYERENS_ERROR_HPP_
