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

#include "layerens/enumeration.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cctype>
#include <thread>
#include <unordered_map>

#include "layerens/error.hpp"

namespace layerens {

std::uint64_t count_subsets(std::size_t k, std::size_t min_size) {
  if (k > kMaxModels) fail(ErrorCode::kInvalidArgument, "at most 63 models supported");
  std::uint64_t total = 0;
  std::uint64_t binom = 1;  // C(k, s)
  for (std::size_t s = 0; s <= k; ++s) {
    if (s >= min_size) total += binom;
    // C(k, s+1) = C(k, s) * (k - s) / (s + 1); exact in 128 bits.
    binom = static_cast<std::uint64_t>(static_cast<unsigned __int128>(binom) * (k - s) /
                                       (s + 1));
  }
  return total;
}

SubsetEnumerator::SubsetEnumerator(std::size_t k, std::size_t min_size)
    : k_(k), size_(min_size) {
  if (min_size < 2) {
    fail(ErrorCode::kInvalidArgument, "second-layer ensembles need min_size >= 2");
  }
  if (k > kMaxModels) fail(ErrorCode::kInvalidArgument, "at most 63 models supported");
  if (k < min_size) {
    fail(ErrorCode::kTooFewModels, std::to_string(k) + " models cannot form ensembles of " +
                                       std::to_string(min_size) + " or more");
  }
}

bool SubsetEnumerator::next(std::vector<std::uint32_t>& members) {
  if (!started_) {
    started_ = true;
    current_.resize(size_);
    for (std::size_t i = 0; i < size_; ++i) current_[i] = static_cast<std::uint32_t>(i);
    members = current_;
    return true;
  }
  if (size_ > k_) return false;
  // Rightmost position that can still advance.
  std::size_t i = size_;
  while (i > 0 && current_[i - 1] == k_ - size_ + (i - 1)) --i;
  if (i == 0) {
    ++size_;
    if (size_ > k_) return false;
    current_.resize(size_);
    for (std::size_t j = 0; j < size_; ++j) current_[j] = static_cast<std::uint32_t>(j);
  } else {
    ++current_[i - 1];
    for (std::size_t j = i; j < size_; ++j) current_[j] = current_[j - 1] + 1;
  }
  members = current_;
  return true;
}

std::vector<std::uint64_t> enumerate_subset_masks(std::size_t k, std::size_t min_size) {
  SubsetEnumerator it(k, min_size);
  std::vector<std::uint64_t> masks;
  masks.reserve(count_subsets(k, min_size));
  std::vector<std::uint32_t> members;
  while (it.next(members)) {
    std::uint64_t mask = 0;
    for (auto m : members) mask |= std::uint64_t{1} << m;
    masks.push_back(mask);
  }
  return masks;
}

std::vector<SecondLayerEnsemble> enumerate_subsets(const std::vector<std::string>& model_ids,
                                                   std::size_t min_size) {
  if (!std::is_sorted(model_ids.begin(), model_ids.end()) ||
      std::adjacent_find(model_ids.begin(), model_ids.end()) != model_ids.end()) {
    fail(ErrorCode::kInvalidArgument, "model ids must be sorted and distinct");
  }
  SubsetEnumerator it(model_ids.size(), min_size);
  std::vector<SecondLayerEnsemble> out;
  std::vector<std::uint32_t> members;
  while (it.next(members)) {
    std::vector<std::string> names;
    names.reserve(members.size());
    for (auto m : members) names.push_back(model_ids[m]);
    out.emplace_back(std::move(names));
  }
  return out;
}

bool ranks_before(const EnsembleResult& a, const EnsembleResult& b) {
  if (a.f1 != b.f1) return a.f1 > b.f1;
  if (a.spec.size() != b.spec.size()) return a.spec.size() < b.spec.size();
  return a.spec.members() < b.spec.members();
}

FirstLayerVotes compute_first_layer_votes(const RunSet& runs, CombinerPolicy policy,
                                          bool fallback) {
  FirstLayerVotes out;
  out.model_ids = runs.model_ids();
  out.num_examples = runs.num_examples();
  const std::size_t k = out.model_ids.size();
  out.votes.resize(out.num_examples * k);
  std::vector<Vote> member_votes;
  for (std::size_t m = 0; m < k; ++m) {
    const FirstLayerEnsemble ensemble = first_layer_ensemble_for(runs, out.model_ids[m]);
    for (std::size_t i = 0; i < out.num_examples; ++i) {
      Vote v;
      if (policy == CombinerPolicy::kDistributionAverage || fallback) {
        v = first_layer_predict(ensemble, runs, i, policy);
      } else {
        member_votes.clear();
        for (const RunId& id : ensemble.member_run_ids) {
          member_votes.push_back(argmax_vote(runs.run(id), i));
        }
        v = combine_votes_unchecked(member_votes, policy, /*fallback=*/false);
      }
      out.votes[i * k + m] = v;
    }
  }
  return out;
}

namespace {

CombinerPolicy second_layer_policy(CombinerPolicy policy) {
  return policy == CombinerPolicy::kDistributionAverage ? CombinerPolicy::kMaxOfSupporters
                                                        : policy;
}

void predict_subset_into(const FirstLayerVotes& votes, std::uint64_t mask,
                         CombinerPolicy policy, bool fallback, std::vector<Vote>& scratch,
                         std::vector<LabelId>& out) {
  out.resize(votes.num_examples);
  for (std::size_t i = 0; i < votes.num_examples; ++i) {
    const auto row = votes.example(i);
    scratch.clear();
    for (std::uint64_t m = mask; m != 0; m &= m - 1) {
      scratch.push_back(row[static_cast<std::size_t>(std::countr_zero(m))]);
    }
    out[i] = combine_votes_unchecked(scratch, policy, fallback).label;
  }
}

std::vector<std::string> member_names(const std::vector<std::string>& model_ids,
                                      std::uint64_t mask) {
  std::vector<std::string> names;
  for (std::uint64_t m = mask; m != 0; m &= m - 1) {
    names.push_back(model_ids[static_cast<std::size_t>(std::countr_zero(m))]);
  }
  return names;
}

}  // namespace

std::vector<LabelId> predict_subset(const FirstLayerVotes& votes, std::uint64_t mask,
                                    CombinerPolicy policy, bool fallback) {
  if (mask == 0) fail(ErrorCode::kEmptyVoteList, "empty ensemble");
  if (votes.model_ids.size() < 64 && (mask >> votes.model_ids.size()) != 0) {
    fail(ErrorCode::kIndexOutOfRange, "ensemble mask references unknown models");
  }
  std::vector<Vote> scratch;
  std::vector<LabelId> out;
  predict_subset_into(votes, mask, second_layer_policy(policy), fallback, scratch, out);
  return out;
}

SweepReport run_sweep(const RunSet& runs, const GoldSet& gold, const LabelSpace& labels,
                      const SweepOptions& options) {
  if (runs.dataset_id() != gold.dataset_id) {
    fail(ErrorCode::kDatasetMismatch, "run set '" + runs.dataset_id() +
                                          "' does not match gold set '" + gold.dataset_id +
                                          "'");
  }
  if (runs.num_examples() != gold.size() || runs.num_labels() != labels.size()) {
    fail(ErrorCode::kShapeMismatch, "run set shape does not match gold set and label space");
  }
  const std::size_t k = runs.by_model().size();
  if (k < 2) fail(ErrorCode::kTooFewModels, "a sweep needs at least two models");

  SweepReport report;
  report.dataset_id = gold.dataset_id;
  report.options = options;
  const std::vector<std::uint64_t> masks = enumerate_subset_masks(k, options.min_size);

  const std::vector<LabelId> gold_labels = gold.gold_labels();
  const std::size_t num_labels = labels.size();
  const auto score = [&](std::span<const LabelId> predictions) {
    return f1_score(confusion_counts(predictions, gold_labels, num_labels), options.f1_mode);
  };

  const FirstLayerVotes votes =
      compute_first_layer_votes(runs, options.policy, options.fallback);
  report.model_ids = votes.model_ids;

  std::vector<LabelId> predictions(gold.size());
  for (std::size_t m = 0; m < k; ++m) {
    FirstLayerResult fl;
    fl.model_id = votes.model_ids[m];
    for (std::size_t idx : runs.by_model().at(fl.model_id)) {
      const PredictionRun& run = runs.runs()[idx];
      fl.members.push_back(run.run_id);
      for (std::size_t i = 0; i < gold.size(); ++i) {
        predictions[i] = argmax_vote(run.matrix.row(i)).label;
      }
      fl.run_f1s.push_back(score(predictions));
    }
    for (std::size_t i = 0; i < gold.size(); ++i) predictions[i] = votes.example(i)[m].label;
    fl.ensemble_f1 = score(predictions);
    report.first_layer.push_back(std::move(fl));
  }

  const CombinerPolicy policy = second_layer_policy(options.policy);
  std::vector<EnsembleResult> results;
  results.reserve(masks.size());
  for (std::uint64_t mask : masks) {
    results.push_back(
        EnsembleResult{SecondLayerEnsemble(member_names(votes.model_ids, mask)), mask, 0.0, 0,
                       std::nullopt});
  }

  // Results land at their enumeration index, so the merge order does not
  // depend on scheduling.
  std::atomic<std::size_t> next{0};
  constexpr std::size_t kChunk = 32;
  const auto worker = [&] {
    std::vector<Vote> scratch;
    std::vector<LabelId> local;
    while (true) {
      const std::size_t begin = next.fetch_add(kChunk);
      if (begin >= results.size()) break;
      const std::size_t end = std::min(results.size(), begin + kChunk);
      for (std::size_t r = begin; r < end; ++r) {
        predict_subset_into(votes, results[r].mask, policy, options.fallback, scratch, local);
        const ConfusionCounts counts = confusion_counts(local, gold_labels, num_labels);
        results[r].f1 = f1_score(counts, options.f1_mode);
        results[r].num_correct = counts.num_correct();
      }
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(options.jobs, results.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(jobs);
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }

  std::sort(results.begin(), results.end(), ranks_before);
  const std::size_t retain =
      options.retain_predictions ? results.size() : std::min(options.retain_top, results.size());
  std::vector<Vote> scratch;
  for (std::size_t r = 0; r < retain; ++r) {
    std::vector<LabelId> kept;
    predict_subset_into(votes, results[r].mask, policy, options.fallback, scratch, kept);
    results[r].predictions = std::move(kept);
  }
  report.results = std::move(results);
  report.best = report.results.front();
  return report;
}

std::vector<std::size_t> canonical_order(const SweepReport& report) {
  std::unordered_map<std::uint64_t, std::size_t> rank_of;
  rank_of.reserve(report.results.size());
  for (std::size_t r = 0; r < report.results.size(); ++r) rank_of[report.results[r].mask] = r;
  std::vector<std::size_t> order;
  order.reserve(report.results.size());
  for (std::uint64_t mask :
       enumerate_subset_masks(report.model_ids.size(), report.options.min_size)) {
    order.push_back(rank_of.at(mask));
  }
  return order;
}

const EnsembleResult& best_subject_to(const SweepReport& report,
                                      const EnsemblePredicate& predicate) {
  for (const auto& result : report.results) {
    if (predicate(result.spec)) return result;
  }
  fail(ErrorCode::kNoMatchingEnsemble, "no ensemble satisfies the predicate");
}

bool is_character_model(std::string_view model_id) {
  std::string lower(model_id);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return lower.find("char") != std::string::npos;
}

bool contains_character_model(const SecondLayerEnsemble& ensemble) {
  return std::any_of(ensemble.members().begin(), ensemble.members().end(),
                     [](const std::string& m) { return is_character_model(m); });
}

}  // namespace layerens
