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

#ifndef LAYERENS_METRICS_HPP_
#define LAYERENS_METRICS_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "layerens/corpus.hpp"

namespace layerens {

// All scores are percentages in [0, 100].

enum class F1Mode { kMicro, kMacro };
enum class GainMode { kVsMean, kVsMin };

std::string_view to_string(F1Mode mode) noexcept;
std::string_view to_string(GainMode mode) noexcept;
F1Mode parse_f1_mode(std::string_view text);      // "micro" | "macro"
GainMode parse_gain_mode(std::string_view text);  // "mean" | "min"

// Per-label counts. A kNoLabel prediction is a false negative for the gold
// label and a false positive for nobody.
struct ConfusionCounts {
  std::vector<std::uint32_t> true_positive;
  std::vector<std::uint32_t> false_positive;
  std::vector<std::uint32_t> false_negative;
  std::size_t total = 0;

  std::size_t num_correct() const;
};

// Throws kLengthMismatch, kInvalidArgument (empty input), kIndexOutOfRange
// (label id >= num_labels).
ConfusionCounts confusion_counts(std::span<const LabelId> predictions,
                                 std::span<const LabelId> gold, std::size_t num_labels);

// Pooled 2TP / (2TP + FP + FN). Equal to accuracy when nothing abstains.
double micro_f1(const ConfusionCounts& counts);
// Equal-weight mean of per-class F1 over classes present in predictions or
// gold.
double macro_f1(const ConfusionCounts& counts);
double f1_score(const ConfusionCounts& counts, F1Mode mode);

double micro_f1(std::span<const LabelId> predictions, const GoldSet& gold,
                std::size_t num_labels);
double macro_f1(std::span<const LabelId> predictions, const GoldSet& gold,
                std::size_t num_labels);

double accuracy(std::span<const LabelId> predictions, std::span<const LabelId> gold);

// Throws kEmptyConstituents.
double first_layer_gain(double ensemble_f1, std::span<const double> constituent_f1s,
                        GainMode mode);

struct LayerScores {
  std::vector<double> constituent_f1s;
  double ensemble_f1 = 0.0;
};

// model_id -> scores. Mean of first_layer_gain over the models. Throws
// kEmptyConstituents on an empty table.
double dataset_layer_gain(const std::map<std::string, LayerScores>& table, GainMode mode);

struct GainStats {
  double gain_vs_mean = 0.0;
  double gain_vs_min = 0.0;
  std::map<std::string, double> per_model_vs_mean;
  std::map<std::string, double> per_model_vs_min;
};

GainStats layer_gain_stats(const std::map<std::string, LayerScores>& table);

// best_second_layer - best_individual, never clamped.
double total_gain(double best_individual_f1, double best_second_layer_f1);

// dataset -> ensemble F1 and dataset -> component F1s. Per dataset the
// first_layer_gain of the ensemble over its components, then the mean over
// datasets. Throws kDatasetMismatch when the key sets differ.
double pairwise_ensemble_increase(
    const std::map<std::string, double>& ensemble_f1_by_dataset,
    const std::map<std::string, std::vector<double>>& component_f1s_by_dataset,
    GainMode mode);

// Two decimals, half away from zero: 1.005 -> "1.01", -0.125 -> "-0.13".
std::string format_percent(double value);
double round_half_up_2(double value);

}  // namespace layerens

#endif  // LAYERENS_METRICS_HPP_
