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

// Desk-scale prediction sources: a seeded multinomial logistic regression
// over word and/or character n-gram features, and a synthetic predictor
// generator with controllable accuracy and error correlation.

#ifndef LAYERENS_TOY_MODELS_HPP_
#define LAYERENS_TOY_MODELS_HPP_

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "layerens/corpus.hpp"
#include "layerens/prediction_store.hpp"

namespace layerens {

// Portable draws on top of std::mt19937_64, whose output sequence is fixed
// by the standard (the std distributions are not).
class DeterministicRng {
 public:
  explicit DeterministicRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  // [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  // [0, bound), unbiased.
  std::uint64_t below(std::uint64_t bound);

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Mixes a base seed with a stream tag so related generators stay independent.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

enum class FeatureMode { kBagOfWords, kCharNgram, kBoth };

std::string_view to_string(FeatureMode mode) noexcept;
FeatureMode parse_feature_mode(std::string_view text);

struct ToyModelConfig {
  FeatureMode feature_mode = FeatureMode::kBagOfWords;
  int ngram = 3;  // 2..4, used by the character modes
  std::uint64_t seed = 1;
  int epochs = 20;
  double learning_rate = 0.5;
  double l2 = 1e-4;
  int batch_size = 16;
  // Fraction of the training set kept, drawn with sample_seed.
  double sample_fraction = 1.0;
  std::uint64_t sample_seed = 0;

  friend bool operator==(const ToyModelConfig&, const ToyModelConfig&) = default;
};

// Throws kInvalidArgument.
void validate(const ToyModelConfig& config);

// Features of one utterance: "w:<token>" words and "c:<ngram>" character
// n-grams over code points, with '<' '>' marking token boundaries.
std::vector<std::string> extract_features(const std::vector<std::string>& tokens,
                                          FeatureMode mode, int ngram);

struct ModelParameters {
  ToyModelConfig config;
  std::vector<std::string> labels;      // label space texts, in order
  std::vector<std::string> vocabulary;  // feature strings, column order
  // labels.size() rows x (vocabulary.size() + 1) columns; the last column is
  // the bias.
  std::vector<double> weights;

  std::size_t num_labels() const noexcept { return labels.size(); }
  std::size_t row_width() const noexcept { return vocabulary.size() + 1; }
  double weight(std::size_t label, std::size_t feature) const {
    return weights[label * row_width() + feature];
  }

  friend bool operator==(const ModelParameters&, const ModelParameters&) = default;
};

std::string serialize_parameters(const ModelParameters& params);
ModelParameters parse_parameters(std::string_view json_text);
void save_parameters(const std::filesystem::path& path, const ModelParameters& params);
ModelParameters load_parameters(const std::filesystem::path& path);

// Deterministic in (config, data). Throws kEmptyTrainSet, kUnknownLabel,
// kInvalidArgument.
ModelParameters train_toy_model(const ToyModelConfig& config, const GoldSet& train_gold,
                                const LabelSpace& labels);

// Softmax over linear scores. Throws kShapeMismatch if the parameters were
// trained against a different label space.
PredictionRun predict_toy(const ModelParameters& params, const GoldSet& test_gold,
                          const LabelSpace& labels, const RunId& run_id);

// Row i = softmax(W x_i); exposed for tests.
std::vector<double> predict_row(const ModelParameters& params,
                                const std::vector<std::string>& tokens);

struct SyntheticPredictorConfig {
  double accuracy = 0.8;
  // Per example and predictor: probability of copying the shared draw.
  double correlation = 0.0;
  double confidence_sharpness = 2.0;
  std::uint64_t seed = 1;
  std::string model_id = "Synth";
};

// n_predictors runs of one model id (init_index 1..n). Throws
// kDegenerateLabelSpace (C < 2), kInvalidArgument.
RunSet generate_synthetic_runs(const SyntheticPredictorConfig& config, int n_predictors,
                               const GoldSet& gold, const LabelSpace& labels);

// A named configuration in the bundled 12 x 3 toy grid.
struct ToyGridEntry {
  RunId run_id;
  ToyModelConfig config;
};

// 4 feature configurations x 3 variants = 12 model ids, each trained with 3
// initialization seeds.
std::vector<ToyGridEntry> toy_grid(std::uint64_t seed);

struct TrainedToyRun {
  ModelParameters params;
  PredictionRun predictions;
};

// Trains every grid entry on `train` and predicts `eval`. Entries are
// independent and may train on `jobs` threads; output order follows `grid`.
std::vector<TrainedToyRun> train_toy_grid(const std::vector<ToyGridEntry>& grid,
                                          const GoldSet& train, const GoldSet& eval,
                                          const LabelSpace& labels, std::size_t jobs = 1);

struct ToyCorpusOptions {
  std::size_t num_examples = 500;
  std::uint64_t seed = 7;
  std::string id_prefix = "toy";
  std::string dataset_id = "toy";
};

// Synthetic intent corpus with overlapping vocabularies, misspellings and a
// few multi-intent utterances; fixed label space order.
Corpus generate_toy_corpus(const ToyCorpusOptions& options);

}  // namespace layerens

#endif  // LAYERENS_TOY_MODELS_HPP_
