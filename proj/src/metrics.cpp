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

#include "layerens/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "layerens/error.hpp"

namespace layerens {

std::string_view to_string(F1Mode mode) noexcept {
  return mode == F1Mode::kMicro ? "micro" : "macro";
}

std::string_view to_string(GainMode mode) noexcept {
  return mode == GainMode::kVsMean ? "mean" : "min";
}

F1Mode parse_f1_mode(std::string_view text) {
  if (text == "micro") return F1Mode::kMicro;
  if (text == "macro") return F1Mode::kMacro;
  fail(ErrorCode::kInvalidArgument, "unknown F1 mode: " + std::string(text));
}

GainMode parse_gain_mode(std::string_view text) {
  if (text == "mean" || text == "vs_mean") return GainMode::kVsMean;
  if (text == "min" || text == "vs_min") return GainMode::kVsMin;
  fail(ErrorCode::kInvalidArgument, "unknown gain mode: " + std::string(text));
}

std::size_t ConfusionCounts::num_correct() const {
  return std::accumulate(true_positive.begin(), true_positive.end(), std::size_t{0});
}

ConfusionCounts confusion_counts(std::span<const LabelId> predictions,
                                 std::span<const LabelId> gold, std::size_t num_labels) {
  if (predictions.size() != gold.size()) {
    fail(ErrorCode::kLengthMismatch, std::to_string(predictions.size()) +
                                         " predictions for " + std::to_string(gold.size()) +
                                         " gold labels");
  }
  if (gold.empty()) fail(ErrorCode::kInvalidArgument, "F1 of an empty evaluation set");
  ConfusionCounts counts;
  counts.true_positive.assign(num_labels, 0);
  counts.false_positive.assign(num_labels, 0);
  counts.false_negative.assign(num_labels, 0);
  counts.total = gold.size();
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const LabelId g = gold[i];
    const LabelId p = predictions[i];
    if (g.value >= num_labels || (p != kNoLabel && p.value >= num_labels)) {
      fail(ErrorCode::kIndexOutOfRange, "label id outside label space");
    }
    if (p == g) {
      ++counts.true_positive[g.value];
    } else {
      ++counts.false_negative[g.value];
      if (p != kNoLabel) ++counts.false_positive[p.value];
    }
  }
  return counts;
}

double micro_f1(const ConfusionCounts& counts) {
  const auto sum = [](const std::vector<std::uint32_t>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0);
  };
  const double tp = sum(counts.true_positive);
  const double denom = 2.0 * tp + sum(counts.false_positive) + sum(counts.false_negative);
  return denom == 0.0 ? 0.0 : 100.0 * 2.0 * tp / denom;
}

double macro_f1(const ConfusionCounts& counts) {
  double total = 0.0;
  std::size_t present = 0;
  for (std::size_t c = 0; c < counts.true_positive.size(); ++c) {
    const double tp = counts.true_positive[c];
    const double denom = 2.0 * tp + counts.false_positive[c] + counts.false_negative[c];
    if (denom == 0.0) continue;
    total += 2.0 * tp / denom;
    ++present;
  }
  return present == 0 ? 0.0 : 100.0 * total / static_cast<double>(present);
}

double f1_score(const ConfusionCounts& counts, F1Mode mode) {
  return mode == F1Mode::kMicro ? micro_f1(counts) : macro_f1(counts);
}

double micro_f1(std::span<const LabelId> predictions, const GoldSet& gold,
                std::size_t num_labels) {
  const auto g = gold.gold_labels();
  return micro_f1(confusion_counts(predictions, g, num_labels));
}

double macro_f1(std::span<const LabelId> predictions, const GoldSet& gold,
                std::size_t num_labels) {
  const auto g = gold.gold_labels();
  return macro_f1(confusion_counts(predictions, g, num_labels));
}

double accuracy(std::span<const LabelId> predictions, std::span<const LabelId> gold) {
  if (predictions.size() != gold.size()) {
    fail(ErrorCode::kLengthMismatch, "prediction/gold length mismatch");
  }
  if (gold.empty()) fail(ErrorCode::kInvalidArgument, "accuracy of an empty evaluation set");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) correct += predictions[i] == gold[i] ? 1 : 0;
  return 100.0 * static_cast<double>(correct) / static_cast<double>(gold.size());
}

double first_layer_gain(double ensemble_f1, std::span<const double> constituent_f1s,
                        GainMode mode) {
  if (constituent_f1s.empty()) {
    fail(ErrorCode::kEmptyConstituents, "gain needs at least one constituent score");
  }
  if (mode == GainMode::kVsMin) {
    return ensemble_f1 - *std::min_element(constituent_f1s.begin(), constituent_f1s.end());
  }
  const double mean = std::accumulate(constituent_f1s.begin(), constituent_f1s.end(), 0.0) /
                      static_cast<double>(constituent_f1s.size());
  return ensemble_f1 - mean;
}

double dataset_layer_gain(const std::map<std::string, LayerScores>& table, GainMode mode) {
  if (table.empty()) fail(ErrorCode::kEmptyConstituents, "empty gain table");
  double total = 0.0;
  for (const auto& [model, scores] : table) {
    total += first_layer_gain(scores.ensemble_f1, scores.constituent_f1s, mode);
  }
  return total / static_cast<double>(table.size());
}

GainStats layer_gain_stats(const std::map<std::string, LayerScores>& table) {
  GainStats stats;
  stats.gain_vs_mean = dataset_layer_gain(table, GainMode::kVsMean);
  stats.gain_vs_min = dataset_layer_gain(table, GainMode::kVsMin);
  for (const auto& [model, scores] : table) {
    stats.per_model_vs_mean[model] =
        first_layer_gain(scores.ensemble_f1, scores.constituent_f1s, GainMode::kVsMean);
    stats.per_model_vs_min[model] =
        first_layer_gain(scores.ensemble_f1, scores.constituent_f1s, GainMode::kVsMin);
  }
  return stats;
}

double total_gain(double best_individual_f1, double best_second_layer_f1) {
  return best_second_layer_f1 - best_individual_f1;
}

double pairwise_ensemble_increase(
    const std::map<std::string, double>& ensemble_f1_by_dataset,
    const std::map<std::string, std::vector<double>>& component_f1s_by_dataset,
    GainMode mode) {
  if (ensemble_f1_by_dataset.size() != component_f1s_by_dataset.size() ||
      !std::equal(ensemble_f1_by_dataset.begin(), ensemble_f1_by_dataset.end(),
                  component_f1s_by_dataset.begin(),
                  [](const auto& a, const auto& b) { return a.first == b.first; })) {
    fail(ErrorCode::kDatasetMismatch, "ensemble and component scores cover different datasets");
  }
  if (ensemble_f1_by_dataset.empty()) fail(ErrorCode::kEmptyConstituents, "no datasets");
  double total = 0.0;
  for (const auto& [dataset, f1] : ensemble_f1_by_dataset) {
    total += first_layer_gain(f1, component_f1s_by_dataset.at(dataset), mode);
  }
  return total / static_cast<double>(ensemble_f1_by_dataset.size());
}

namespace {

long long rounded_hundredths(double value) {
  const double scaled = std::abs(value) * 100.0;
  const auto magnitude = static_cast<long long>(std::floor(scaled + 0.5 + 1e-9));
  return value < 0 ? -magnitude : magnitude;
}

}  // namespace

double round_half_up_2(double value) {
  return static_cast<double>(rounded_hundredths(value)) / 100.0;
}

std::string format_percent(double value) {
  const long long cents = rounded_hundredths(value);
  const long long mag = cents < 0 ? -cents : cents;
  std::string frac = std::to_string(mag % 100);
  if (frac.size() < 2) frac.insert(0, "0");
  return (cents < 0 ? "-" : "") + std::to_string(mag / 100) + "." + frac;
}

}  // namespace layerens
