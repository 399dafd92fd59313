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

// Exhaustive second-layer sweep.
//
// With K first-layer ensembles there are 2^K - K - 1 second-layer ensembles
// of size >= 2. First-layer votes are computed once per (model, example);
// every subset is then scored against those cached votes. Subsets may be
// scored concurrently, results are always merged into the canonical order.

#ifndef LAYERENS_ENUMERATION_HPP_
#define LAYERENS_ENUMERATION_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "layerens/combiner.hpp"
#include "layerens/corpus.hpp"
#include "layerens/metrics.hpp"
#include "layerens/prediction_store.hpp"

namespace layerens {

inline constexpr std::size_t kMaxModels = 63;

// Number of subsets of a K-set with at least `min_size` members.
std::uint64_t count_subsets(std::size_t k, std::size_t min_size = 2);

// Yields member-index lists in canonical order: increasing size, then
// lexicographic over indices. Index order is the caller's (sorted) model
// order, so lexicographic indices mean lexicographic member names.
class SubsetEnumerator {
 public:
  // Throws kTooFewModels (k < min_size), kInvalidArgument (min_size < 2 or
  // k > kMaxModels).
  SubsetEnumerator(std::size_t k, std::size_t min_size = 2);

  // False once every subset has been produced.
  bool next(std::vector<std::uint32_t>& members);

 private:
  std::size_t k_;
  std::size_t size_;
  std::vector<std::uint32_t> current_;
  bool started_ = false;
};

// Materialized canonical order, each subset as a bitmask over model indices.
std::vector<std::uint64_t> enumerate_subset_masks(std::size_t k, std::size_t min_size = 2);

// Convenience over names: `model_ids` must be sorted and distinct.
std::vector<SecondLayerEnsemble> enumerate_subsets(const std::vector<std::string>& model_ids,
                                                   std::size_t min_size = 2);

struct EnsembleResult {
  SecondLayerEnsemble spec;
  std::uint64_t mask = 0;  // bit k set <=> model_ids[k] is a member
  double f1 = 0.0;
  std::size_t num_correct = 0;
  // Filled only for retained results; label per gold example.
  std::optional<std::vector<LabelId>> predictions;
};

// f1 desc, member count asc, member list asc.
bool ranks_before(const EnsembleResult& a, const EnsembleResult& b);

struct FirstLayerResult {
  std::string model_id;
  std::vector<RunId> members;
  std::vector<double> run_f1s;  // init_index order
  double ensemble_f1 = 0.0;
};

struct SweepOptions {
  std::size_t min_size = 2;
  F1Mode f1_mode = F1Mode::kMicro;
  CombinerPolicy policy = CombinerPolicy::kMaxOfSupporters;
  // When false, no confidence fallback: no strict majority means abstain.
  bool fallback = true;
  std::size_t jobs = 1;
  // Retain predictions for every result (memory heavy) ...
  bool retain_predictions = false;
  // ... or only for this many top-ranked results.
  std::size_t retain_top = 25;
};

struct SweepReport {
  std::string dataset_id;
  SweepOptions options;
  std::vector<std::string> model_ids;  // sorted
  std::vector<FirstLayerResult> first_layer;  // model_ids order
  std::vector<EnsembleResult> results;        // ranked
  EnsembleResult best;
};

// Per-model, per-example first-layer votes; entry [i * K + k] is model k on
// example i.
struct FirstLayerVotes {
  std::vector<std::string> model_ids;
  std::size_t num_examples = 0;
  std::vector<Vote> votes;

  std::span<const Vote> example(std::size_t i) const {
    return {votes.data() + i * model_ids.size(), model_ids.size()};
  }
};

FirstLayerVotes compute_first_layer_votes(const RunSet& runs, CombinerPolicy policy,
                                          bool fallback = true);

// Predictions of one subset (bitmask over votes.model_ids).
std::vector<LabelId> predict_subset(const FirstLayerVotes& votes, std::uint64_t mask,
                                    CombinerPolicy policy, bool fallback = true);

// Throws kTooFewModels, kShapeMismatch, kDatasetMismatch plus anything from
// the combiner and metrics.
SweepReport run_sweep(const RunSet& runs, const GoldSet& gold, const LabelSpace& labels,
                      const SweepOptions& options = {});

// Indices into report.results listing them in canonical enumeration order
// instead of rank order.
std::vector<std::size_t> canonical_order(const SweepReport& report);

using EnsemblePredicate = std::function<bool(const SecondLayerEnsemble&)>;

// Throws kNoMatchingEnsemble.
const EnsembleResult& best_subject_to(const SweepReport& report,
                                      const EnsemblePredicate& predicate);

// Case-insensitive "char" in the model id marks a character-feature model.
bool is_character_model(std::string_view model_id);
bool contains_character_model(const SecondLayerEnsemble& ensemble);

}  // namespace layerens

#endif  // LAYERENS_ENUMERATION_HPP_
