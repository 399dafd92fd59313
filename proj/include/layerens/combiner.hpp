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

// Majority vote with confidence.
//
// For n votes: if some label is held by strictly more than n/2 voters it
// wins; otherwise the single most confident vote wins, the earliest voter
// taking confidence ties. The same rule combines initializations of one
// model (first layer) and first-layer ensembles of different models (second
// layer).

#ifndef LAYERENS_COMBINER_HPP_
#define LAYERENS_COMBINER_HPP_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "layerens/prediction_store.hpp"

namespace layerens {

// Confidence a strict-majority winner carries forward.
enum class CombinerPolicy {
  kMaxOfSupporters,   // default
  kMeanOfSupporters,
  // First layer only: average the member rows, then take the argmax. The
  // second layer still votes with kMaxOfSupporters.
  kDistributionAverage,
};

std::string_view to_string(CombinerPolicy policy) noexcept;
CombinerPolicy parse_combiner_policy(std::string_view text);

// Throws kEmptyVoteList, kInvalidArgument (confidence outside [0,1]).
Vote majority_vote_with_confidence(std::span<const Vote> votes,
                                   CombinerPolicy policy = CombinerPolicy::kMaxOfSupporters);

// Strict-majority branch only; nullopt when no label has > n/2 support.
std::optional<Vote> strict_majority(std::span<const Vote> votes,
                                    CombinerPolicy policy = CombinerPolicy::kMaxOfSupporters);

// Unchecked hot-path variant used by the sweep; `votes` must be non-empty.
// Returns {kNoLabel, 0} when `fallback` is false and there is no majority.
Vote combine_votes_unchecked(std::span<const Vote> votes, CombinerPolicy policy,
                             bool fallback) noexcept;

struct FirstLayerEnsemble {
  std::string model_id;
  std::vector<RunId> member_run_ids;  // ordered by init_index
};

// Members are every run of `model_id` in the set, in init_index order.
FirstLayerEnsemble first_layer_ensemble_for(const RunSet& runs, const std::string& model_id);

class SecondLayerEnsemble {
 public:
  // Empty placeholder; only the checked constructor yields a usable ensemble.
  SecondLayerEnsemble() = default;
  // Sorts and rejects duplicates / fewer than two members (kInvalidArgument).
  explicit SecondLayerEnsemble(std::vector<std::string> member_model_ids);

  const std::vector<std::string>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }

  // "/"-joined members, e.g. "ABiCNN/CNN/GRU".
  std::string joined() const;

  friend bool operator==(const SecondLayerEnsemble&, const SecondLayerEnsemble&) = default;

 private:
  std::vector<std::string> members_;
};

// Throws kMissingRun, kIndexOutOfRange, kEmptyVoteList.
Vote first_layer_predict(const FirstLayerEnsemble& ensemble, const RunSet& runs,
                         std::size_t example_index,
                         CombinerPolicy policy = CombinerPolicy::kMaxOfSupporters);

// Throws kMissingMemberVote.
Vote second_layer_predict(const SecondLayerEnsemble& ensemble,
                          const std::map<std::string, Vote>& first_layer_votes,
                          CombinerPolicy policy = CombinerPolicy::kMaxOfSupporters);

}  // namespace layerens

#endif  // LAYERENS_COMBINER_HPP_
