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

#include "layerens/combiner.hpp"

#include <algorithm>
#include <cmath>

#include "layerens/error.hpp"

namespace layerens {

std::string_view to_string(CombinerPolicy policy) noexcept {
  switch (policy) {
    case CombinerPolicy::kMaxOfSupporters: return "max_of_supporters";
    case CombinerPolicy::kMeanOfSupporters: return "mean_of_supporters";
    case CombinerPolicy::kDistributionAverage: return "distribution_average";
  }
  return "unknown";
}

CombinerPolicy parse_combiner_policy(std::string_view text) {
  if (text == "max" || text == "max_of_supporters") return CombinerPolicy::kMaxOfSupporters;
  if (text == "mean" || text == "mean_of_supporters") return CombinerPolicy::kMeanOfSupporters;
  if (text == "average" || text == "distribution_average") {
    return CombinerPolicy::kDistributionAverage;
  }
  fail(ErrorCode::kInvalidArgument, "unknown combiner policy: " + std::string(text));
}

Vote combine_votes_unchecked(std::span<const Vote> votes, CombinerPolicy policy,
                             bool fallback) noexcept {
  // Boyer-Moore: the only label that can hold a strict majority.
  LabelId candidate = votes[0].label;
  std::size_t balance = 0;
  for (const Vote& v : votes) {
    if (balance == 0) {
      candidate = v.label;
      balance = 1;
    } else if (v.label == candidate) {
      ++balance;
    } else {
      --balance;
    }
  }

  std::size_t support = 0;
  double max_conf = 0.0;
  double sum_conf = 0.0;
  std::size_t most_confident = 0;
  for (std::size_t i = 0; i < votes.size(); ++i) {
    if (votes[i].label == candidate) {
      if (support == 0 || votes[i].confidence > max_conf) max_conf = votes[i].confidence;
      sum_conf += votes[i].confidence;
      ++support;
    }
    if (votes[i].confidence > votes[most_confident].confidence) most_confident = i;
  }

  if (2 * support > votes.size()) {
    const double conf = policy == CombinerPolicy::kMeanOfSupporters
                            ? sum_conf / static_cast<double>(support)
                            : max_conf;
    return Vote{candidate, conf};
  }
  if (!fallback) return Vote{kNoLabel, 0.0};
  return votes[most_confident];
}

namespace {

void check_votes(std::span<const Vote> votes) {
  if (votes.empty()) fail(ErrorCode::kEmptyVoteList, "cannot combine an empty vote list");
  for (const Vote& v : votes) {
    if (!(v.confidence >= 0.0 && v.confidence <= 1.0)) {
      fail(ErrorCode::kInvalidArgument, "vote confidence outside [0,1]");
    }
  }
}

}  // namespace

Vote majority_vote_with_confidence(std::span<const Vote> votes, CombinerPolicy policy) {
  check_votes(votes);
  return combine_votes_unchecked(votes, policy, /*fallback=*/true);
}

std::optional<Vote> strict_majority(std::span<const Vote> votes, CombinerPolicy policy) {
  check_votes(votes);
  const Vote v = combine_votes_unchecked(votes, policy, /*fallback=*/false);
  if (v.label == kNoLabel) return std::nullopt;
  return v;
}

FirstLayerEnsemble first_layer_ensemble_for(const RunSet& runs, const std::string& model_id) {
  auto it = runs.by_model().find(model_id);
  if (it == runs.by_model().end()) {
    fail(ErrorCode::kMissingRun, "no runs for model " + model_id);
  }
  FirstLayerEnsemble ensemble{model_id, {}};
  for (std::size_t i : it->second) ensemble.member_run_ids.push_back(runs.runs()[i].run_id);
  return ensemble;
}

SecondLayerEnsemble::SecondLayerEnsemble(std::vector<std::string> member_model_ids)
    : members_(std::move(member_model_ids)) {
  std::sort(members_.begin(), members_.end());
  if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
    fail(ErrorCode::kInvalidArgument, "second-layer ensemble members must be distinct");
  }
  if (members_.size() < 2) {
    fail(ErrorCode::kInvalidArgument, "second-layer ensemble needs at least two members");
  }
}

std::string SecondLayerEnsemble::joined() const {
  std::string out;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i > 0) out += '/';
    out += members_[i];
  }
  return out;
}

Vote first_layer_predict(const FirstLayerEnsemble& ensemble, const RunSet& runs,
                         std::size_t example_index, CombinerPolicy policy) {
  if (ensemble.member_run_ids.empty()) {
    fail(ErrorCode::kEmptyVoteList, "first-layer ensemble " + ensemble.model_id +
                                        " has no members");
  }
  if (policy == CombinerPolicy::kDistributionAverage) {
    std::vector<double> mean;
    for (const RunId& id : ensemble.member_run_ids) {
      const PredictionRun& run = runs.run(id);
      if (example_index >= run.matrix.rows()) {
        fail(ErrorCode::kIndexOutOfRange, "example " + std::to_string(example_index) +
                                              " out of range");
      }
      const auto row = run.matrix.row(example_index);
      if (mean.empty()) mean.assign(row.size(), 0.0);
      for (std::size_t j = 0; j < row.size(); ++j) mean[j] += row[j];
    }
    const double n = static_cast<double>(ensemble.member_run_ids.size());
    for (double& v : mean) v /= n;
    return argmax_vote(mean);
  }
  std::vector<Vote> votes;
  votes.reserve(ensemble.member_run_ids.size());
  for (const RunId& id : ensemble.member_run_ids) {
    votes.push_back(argmax_vote(runs.run(id), example_index));
  }
  return majority_vote_with_confidence(votes, policy);
}

Vote second_layer_predict(const SecondLayerEnsemble& ensemble,
                          const std::map<std::string, Vote>& first_layer_votes,
                          CombinerPolicy policy) {
  std::vector<Vote> votes;
  votes.reserve(ensemble.size());
  for (const auto& model : ensemble.members()) {
    auto it = first_layer_votes.find(model);
    if (it == first_layer_votes.end()) {
      fail(ErrorCode::kMissingMemberVote, "no first-layer vote for " + model);
    }
    votes.push_back(it->second);
  }
  if (policy == CombinerPolicy::kDistributionAverage) policy = CombinerPolicy::kMaxOfSupporters;
  return majority_vote_with_confidence(votes, policy);
}

}  // namespace layerens
