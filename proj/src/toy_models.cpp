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

#include "layerens/toy_models.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <thread>
#include <unordered_map>

#include "io.hpp"
#include "json.hpp"
#include "layerens/error.hpp"

namespace layerens {
namespace {

using nlohmann::json;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Byte offsets of UTF-8 code point starts, plus the end offset.
std::vector<std::size_t> code_point_bounds(std::string_view s) {
  std::vector<std::size_t> bounds;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) bounds.push_back(i);
  }
  bounds.push_back(s.size());
  return bounds;
}

using SparseRow = std::vector<std::pair<std::uint32_t, double>>;

// L2-normalized feature counts over the known vocabulary; unknown features
// are dropped.
SparseRow featurize(const std::vector<std::string>& tokens, const ToyModelConfig& config,
                    const std::unordered_map<std::string, std::uint32_t>& vocab) {
  std::unordered_map<std::uint32_t, double> counts;
  std::vector<std::uint32_t> order;
  for (const auto& f : extract_features(tokens, config.feature_mode, config.ngram)) {
    auto it = vocab.find(f);
    if (it == vocab.end()) continue;
    auto [slot, inserted] = counts.try_emplace(it->second, 0.0);
    if (inserted) order.push_back(it->second);
    slot->second += 1.0;
  }
  std::sort(order.begin(), order.end());
  double norm = 0.0;
  for (auto idx : order) norm += counts[idx] * counts[idx];
  norm = std::sqrt(norm);
  SparseRow row;
  row.reserve(order.size());
  for (auto idx : order) row.emplace_back(idx, counts[idx] / norm);
  return row;
}

void softmax_in_place(std::vector<double>& scores) {
  const double top = *std::max_element(scores.begin(), scores.end());
  double sum = 0.0;
  for (double& s : scores) {
    s = std::exp(s - top);
    sum += s;
  }
  for (double& s : scores) s /= sum;
}

void linear_scores(const ModelParameters& params, const SparseRow& x,
                   std::vector<double>& scores) {
  const std::size_t width = params.row_width();
  const std::size_t bias = params.vocabulary.size();
  scores.assign(params.num_labels(), 0.0);
  for (std::size_t c = 0; c < params.num_labels(); ++c) {
    const double* w = params.weights.data() + c * width;
    double z = w[bias];
    for (const auto& [f, v] : x) z += w[f] * v;
    scores[c] = z;
  }
}

std::unordered_map<std::string, std::uint32_t> vocab_index(const ModelParameters& params) {
  std::unordered_map<std::string, std::uint32_t> index;
  index.reserve(params.vocabulary.size());
  for (std::size_t i = 0; i < params.vocabulary.size(); ++i) {
    index.emplace(params.vocabulary[i], static_cast<std::uint32_t>(i));
  }
  return index;
}

}  // namespace

std::uint64_t DeterministicRng::below(std::uint64_t bound) {
  if (bound == 0) fail(ErrorCode::kInvalidArgument, "below(0)");
  // Lemire's multiply-shift with rejection.
  unsigned __int128 m = static_cast<unsigned __int128>(engine_()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(engine_()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(base ^ splitmix64(stream + 0x632BE59BD9B4E019ull));
}

std::string_view to_string(FeatureMode mode) noexcept {
  switch (mode) {
    case FeatureMode::kBagOfWords: return "bag_of_words";
    case FeatureMode::kCharNgram: return "char_ngram";
    case FeatureMode::kBoth: return "both";
  }
  return "unknown";
}

FeatureMode parse_feature_mode(std::string_view text) {
  if (text == "bag_of_words" || text == "bow") return FeatureMode::kBagOfWords;
  if (text == "char_ngram" || text == "char") return FeatureMode::kCharNgram;
  if (text == "both") return FeatureMode::kBoth;
  fail(ErrorCode::kInvalidArgument, "unknown feature mode: " + std::string(text));
}

void validate(const ToyModelConfig& config) {
  if (config.feature_mode != FeatureMode::kBagOfWords &&
      (config.ngram < 2 || config.ngram > 4)) {
    fail(ErrorCode::kInvalidArgument, "character n-gram order must be 2..4");
  }
  if (config.epochs < 1) fail(ErrorCode::kInvalidArgument, "epochs must be positive");
  if (!(config.learning_rate > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "learning rate must be positive");
  }
  if (!(config.l2 >= 0.0)) fail(ErrorCode::kInvalidArgument, "l2 must be non-negative");
  if (config.batch_size < 1) fail(ErrorCode::kInvalidArgument, "batch size must be positive");
  if (!(config.sample_fraction > 0.0 && config.sample_fraction <= 1.0)) {
    fail(ErrorCode::kInvalidArgument, "sample fraction must be in (0, 1]");
  }
}

std::vector<std::string> extract_features(const std::vector<std::string>& tokens,
                                          FeatureMode mode, int ngram) {
  std::vector<std::string> features;
  const bool words = mode != FeatureMode::kCharNgram;
  const bool chars = mode != FeatureMode::kBagOfWords;
  for (const auto& token : tokens) {
    if (words) features.push_back("w:" + token);
    if (!chars) continue;
    const std::string padded = "<" + token + ">";
    const auto bounds = code_point_bounds(padded);
    const std::size_t n_points = bounds.size() - 1;
    const auto n = static_cast<std::size_t>(ngram);
    if (n_points <= n) {
      features.push_back("c:" + padded);
      continue;
    }
    for (std::size_t i = 0; i + n <= n_points; ++i) {
      features.push_back("c:" + padded.substr(bounds[i], bounds[i + n] - bounds[i]));
    }
  }
  return features;
}

ModelParameters train_toy_model(const ToyModelConfig& config, const GoldSet& train_gold,
                                const LabelSpace& labels) {
  validate(config);
  if (train_gold.examples.empty()) fail(ErrorCode::kEmptyTrainSet, "empty training set");
  for (const auto& ex : train_gold.examples) {
    if (ex.gold.value >= labels.size()) {
      fail(ErrorCode::kUnknownLabel, "training example " + ex.id + " has a label outside the "
                                     "label space");
    }
  }

  std::vector<std::size_t> kept(train_gold.size());
  for (std::size_t i = 0; i < kept.size(); ++i) kept[i] = i;
  if (config.sample_fraction < 1.0) {
    DeterministicRng sampler(config.sample_seed);
    sampler.shuffle(kept);
    const auto n = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(config.sample_fraction *
                                                 static_cast<double>(kept.size()))));
    kept.resize(n);
    std::sort(kept.begin(), kept.end());
  }

  ModelParameters params;
  params.config = config;
  for (const auto& l : labels.labels()) params.labels.push_back(l.text());
  std::unordered_map<std::string, std::uint32_t> vocab;
  for (std::size_t i : kept) {
    for (auto& f : extract_features(train_gold.examples[i].tokens, config.feature_mode,
                                    config.ngram)) {
      if (vocab.try_emplace(f, static_cast<std::uint32_t>(params.vocabulary.size())).second) {
        params.vocabulary.push_back(std::move(f));
      }
    }
  }

  std::vector<SparseRow> rows;
  std::vector<std::uint32_t> targets;
  rows.reserve(kept.size());
  for (std::size_t i : kept) {
    rows.push_back(featurize(train_gold.examples[i].tokens, config, vocab));
    targets.push_back(train_gold.examples[i].gold.value);
  }

  const std::size_t num_labels = labels.size();
  const std::size_t width = params.row_width();
  const std::size_t bias = params.vocabulary.size();
  DeterministicRng rng(config.seed);
  params.weights.resize(num_labels * width);
  for (double& w : params.weights) w = rng.uniform(-0.01, 0.01);

  std::vector<std::size_t> order(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  const auto batch = static_cast<std::size_t>(config.batch_size);
  std::vector<std::vector<double>> errors(batch);
  std::vector<double> scores;
  const double decay = 1.0 - config.learning_rate * config.l2;

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t end = std::min(order.size(), start + batch);
      // Gradient at the current weights for the whole batch first.
      for (std::size_t b = start; b < end; ++b) {
        linear_scores(params, rows[order[b]], scores);
        softmax_in_place(scores);
        scores[targets[order[b]]] -= 1.0;
        errors[b - start] = scores;
      }
      if (config.l2 > 0.0) {
        for (std::size_t c = 0; c < num_labels; ++c) {
          double* w = params.weights.data() + c * width;
          for (std::size_t f = 0; f < bias; ++f) w[f] *= decay;
        }
      }
      const double step = config.learning_rate / static_cast<double>(end - start);
      for (std::size_t b = start; b < end; ++b) {
        const SparseRow& x = rows[order[b]];
        const auto& err = errors[b - start];
        for (std::size_t c = 0; c < num_labels; ++c) {
          double* w = params.weights.data() + c * width;
          const double g = step * err[c];
          for (const auto& [f, v] : x) w[f] -= g * v;
          w[bias] -= g;
        }
      }
    }
  }
  return params;
}

std::vector<double> predict_row(const ModelParameters& params,
                                const std::vector<std::string>& tokens) {
  const auto index = vocab_index(params);
  std::vector<double> scores;
  linear_scores(params, featurize(tokens, params.config, index), scores);
  softmax_in_place(scores);
  return scores;
}

PredictionRun predict_toy(const ModelParameters& params, const GoldSet& test_gold,
                          const LabelSpace& labels, const RunId& run_id) {
  if (params.num_labels() != labels.size()) {
    fail(ErrorCode::kShapeMismatch, "model has " + std::to_string(params.num_labels()) +
                                        " outputs, label space has " +
                                        std::to_string(labels.size()));
  }
  if (params.weights.size() != params.num_labels() * params.row_width()) {
    fail(ErrorCode::kShapeMismatch, "weight matrix does not match vocabulary and labels");
  }
  // Model output column for each label space position.
  std::vector<std::size_t> column(labels.size());
  for (std::size_t j = 0; j < labels.size(); ++j) {
    const auto& text = labels.labels()[j].text();
    auto it = std::find(params.labels.begin(), params.labels.end(), text);
    if (it == params.labels.end()) {
      fail(ErrorCode::kShapeMismatch, "model has no output for label " + text);
    }
    column[j] = static_cast<std::size_t>(it - params.labels.begin());
  }

  const auto index = vocab_index(params);
  PredictionRun run;
  run.run_id = run_id;
  run.dataset_id = test_gold.dataset_id;
  run.matrix = ProbabilityMatrix(test_gold.size(), labels.size());
  std::vector<double> scores;
  for (std::size_t i = 0; i < test_gold.size(); ++i) {
    linear_scores(params, featurize(test_gold.examples[i].tokens, params.config, index),
                  scores);
    softmax_in_place(scores);
    auto row = run.matrix.row(i);
    for (std::size_t j = 0; j < labels.size(); ++j) row[j] = scores[column[j]];
  }
  return run;
}

std::string serialize_parameters(const ModelParameters& params) {
  const auto& c = params.config;
  json doc;
  doc["format"] = "layerens-toy-model";
  doc["version"] = 1;
  doc["config"] = {{"feature_mode", std::string(to_string(c.feature_mode))},
                   {"ngram", c.ngram},
                   {"seed", c.seed},
                   {"epochs", c.epochs},
                   {"learning_rate", c.learning_rate},
                   {"l2", c.l2},
                   {"batch_size", c.batch_size},
                   {"sample_fraction", c.sample_fraction},
                   {"sample_seed", c.sample_seed}};
  doc["labels"] = params.labels;
  doc["vocabulary"] = params.vocabulary;
  json weights = json::array();
  for (std::size_t l = 0; l < params.num_labels(); ++l) {
    const auto begin = params.weights.begin() + static_cast<std::ptrdiff_t>(l * params.row_width());
    weights.push_back(std::vector<double>(begin, begin + static_cast<std::ptrdiff_t>(params.row_width())));
  }
  doc["weights"] = std::move(weights);
  return doc.dump() + "\n";
}

ModelParameters parse_parameters(std::string_view json_text) {
  ModelParameters params;
  try {
    const json doc = json::parse(json_text);
    if (doc.value("format", "") != "layerens-toy-model") {
      fail(ErrorCode::kParseError, "not a toy model parameter file");
    }
    const json& c = doc.at("config");
    params.config.feature_mode = parse_feature_mode(c.at("feature_mode").get<std::string>());
    params.config.ngram = c.at("ngram").get<int>();
    params.config.seed = c.at("seed").get<std::uint64_t>();
    params.config.epochs = c.at("epochs").get<int>();
    params.config.learning_rate = c.at("learning_rate").get<double>();
    params.config.l2 = c.at("l2").get<double>();
    params.config.batch_size = c.at("batch_size").get<int>();
    params.config.sample_fraction = c.at("sample_fraction").get<double>();
    params.config.sample_seed = c.at("sample_seed").get<std::uint64_t>();
    params.labels = doc.at("labels").get<std::vector<std::string>>();
    params.vocabulary = doc.at("vocabulary").get<std::vector<std::string>>();
    for (const auto& row : doc.at("weights")) {
      const auto values = row.get<std::vector<double>>();
      if (values.size() != params.row_width()) {
        fail(ErrorCode::kShapeMismatch, "weight row width does not match vocabulary");
      }
      params.weights.insert(params.weights.end(), values.begin(), values.end());
    }
    if (params.weights.size() != params.num_labels() * params.row_width()) {
      fail(ErrorCode::kShapeMismatch, "weight rows do not match labels");
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kParseError, std::string("toy model parameters: ") + e.what());
  }
  return params;
}

void save_parameters(const std::filesystem::path& path, const ModelParameters& params) {
  internal::write_file(path, serialize_parameters(params));
}

ModelParameters load_parameters(const std::filesystem::path& path) {
  return parse_parameters(internal::read_file(path));
}

RunSet generate_synthetic_runs(const SyntheticPredictorConfig& config, int n_predictors,
                               const GoldSet& gold, const LabelSpace& labels) {
  const std::size_t num_labels = labels.size();
  if (num_labels < 2) {
    fail(ErrorCode::kDegenerateLabelSpace, "synthetic predictors need at least two labels");
  }
  if (n_predictors < 1) fail(ErrorCode::kInvalidArgument, "need at least one predictor");
  if (!(config.accuracy >= 0.0 && config.accuracy <= 1.0)) {
    fail(ErrorCode::kInvalidArgument, "accuracy must be in [0, 1]");
  }
  if (!(config.correlation >= 0.0 && config.correlation <= 1.0)) {
    fail(ErrorCode::kInvalidArgument, "correlation must be in [0, 1]");
  }
  if (!(config.confidence_sharpness > 0.0)) {
    fail(ErrorCode::kInvalidArgument, "confidence sharpness must be positive");
  }
  validate_model_id(config.model_id);

  // Correct with probability `accuracy`, else a uniform wrong label. Both
  // draws are always consumed so streams stay aligned across settings.
  const auto draw = [&](DeterministicRng& rng, LabelId gold_label) {
    const bool correct = rng.uniform01() < config.accuracy;
    auto wrong = static_cast<std::uint32_t>(rng.below(num_labels - 1));
    if (wrong >= gold_label.value) ++wrong;
    return correct ? gold_label : LabelId{wrong};
  };

  DeterministicRng shared(derive_seed(config.seed, 0));
  std::vector<DeterministicRng> own;
  std::vector<PredictionRun> runs(static_cast<std::size_t>(n_predictors));
  for (int k = 0; k < n_predictors; ++k) {
    own.emplace_back(derive_seed(config.seed, static_cast<std::uint64_t>(k) + 1));
    runs[k].run_id = RunId{config.model_id, k + 1};
    runs[k].dataset_id = gold.dataset_id;
    runs[k].matrix = ProbabilityMatrix(gold.size(), num_labels);
  }

  std::vector<double> logits(num_labels);
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const LabelId truth = gold.examples[i].gold;
    const LabelId shared_label = draw(shared, truth);
    for (int k = 0; k < n_predictors; ++k) {
      DeterministicRng& rng = own[static_cast<std::size_t>(k)];
      const bool copy = rng.uniform01() < config.correlation;
      const LabelId own_label = draw(rng, truth);
      const LabelId label = copy ? shared_label : own_label;
      std::fill(logits.begin(), logits.end(), 0.0);
      logits[label.value] = config.confidence_sharpness * (0.5 + rng.uniform01());
      softmax_in_place(logits);
      auto row = runs[static_cast<std::size_t>(k)].matrix.row(i);
      std::copy(logits.begin(), logits.end(), row.begin());
    }
  }
  return RunSet(gold.dataset_id, std::move(runs));
}

std::vector<ToyGridEntry> toy_grid(std::uint64_t seed) {
  struct Features {
    const char* name;
    FeatureMode mode;
    int ngram;
  };
  static constexpr Features kFeatures[] = {
      {"Bow", FeatureMode::kBagOfWords, 3},
      {"Char3", FeatureMode::kCharNgram, 3},
      {"Char4", FeatureMode::kCharNgram, 4},
      {"BowChar2", FeatureMode::kBoth, 2},
  };
  struct Variant {
    const char* suffix;
    double learning_rate;
    double l2;
    int epochs;
  };
  static constexpr Variant kVariants[] = {
      {"A", 0.5, 1e-4, 12},
      {"B", 0.25, 1e-3, 20},
      {"C", 1.0, 0.0, 6},
  };
  constexpr int kInits = 3;

  std::vector<ToyGridEntry> grid;
  std::uint64_t model_index = 0;
  for (const auto& f : kFeatures) {
    for (const auto& v : kVariants) {
      const std::string model_id = std::string(f.name) + "_" + v.suffix;
      for (int init = 1; init <= kInits; ++init) {
        ToyModelConfig config;
        config.feature_mode = f.mode;
        config.ngram = f.ngram;
        config.learning_rate = v.learning_rate;
        config.l2 = v.l2;
        config.epochs = v.epochs;
        config.batch_size = 16;
        config.sample_fraction = 0.8;
        config.sample_seed = derive_seed(seed, 1000 + model_index);
        config.seed = derive_seed(seed, 2000 + model_index * 16 + static_cast<std::uint64_t>(init));
        grid.push_back({RunId{model_id, init}, config});
      }
      ++model_index;
    }
  }
  return grid;
}

Corpus generate_toy_corpus(const ToyCorpusOptions& options) {
  struct Intent {
    const char* label;
    std::vector<const char*> keywords;
  };
  // Keyword lists overlap on purpose; several words point to more than one
  // intent.
  static const std::vector<Intent> kIntents = {
      {"flight", {"flight", "flights", "fly", "depart", "leaving", "nonstop", "connecting", "trip"}},
      {"airfare", {"fare", "fares", "price", "cost", "cheapest", "ticket", "expensive", "trip"}},
      {"ground_service", {"taxi", "limousine", "rental", "car", "transportation", "downtown", "bus"}},
      {"airline", {"airline", "airlines", "carrier", "united", "delta", "american", "flies"}},
      {"abbreviation", {"abbreviation", "code", "stand", "mean", "letters", "fare", "restriction"}},
      {"aircraft", {"aircraft", "plane", "jet", "boeing", "airbus", "type", "seats"}},
      {"flight_time", {"time", "schedule", "arrive", "arrival", "departure", "when", "leaving"}},
      {"meal", {"meal", "meals", "breakfast", "dinner", "food", "served", "snack"}},
  };
  static const std::vector<std::vector<int>> kMulti = {{0, 1}, {0, 6}};
  static const char* kCities[] = {"boston", "denver", "atlanta", "dallas", "seattle",
                                  "pittsburgh", "baltimore", "oakland", "houston", "miami"};
  static const char* kOpeners[] = {"i", "want", "show", "me", "please", "list", "what",
                                   "is", "the", "give", "need", "find", "tell", "about"};
  static const char* kFiller[] = {"on", "a", "for", "tomorrow", "morning", "evening",
                                  "the", "any", "all", "monday", "friday", "please"};

  DeterministicRng rng(options.seed);
  const auto pick = [&](const auto& list) {
    return std::string(list[rng.below(std::size(list))]);
  };
  const auto misspell = [&](std::string w) {
    if (w.size() < 4) return w;
    const std::size_t pos = 1 + rng.below(w.size() - 2);
    switch (rng.below(3)) {
      case 0: w.erase(pos, 1); break;                     // drop
      case 1: std::swap(w[pos], w[pos + 1 < w.size() ? pos + 1 : pos - 1]); break;
      default: w.insert(pos, 1, w[pos]); break;           // double
    }
    return w;
  };
  const auto keyword = [&](int intent) {
    // One keyword in four comes from a random other intent.
    int source = intent;
    if (rng.uniform01() < 0.25) source = static_cast<int>(rng.below(kIntents.size()));
    std::string w = pick(kIntents[static_cast<std::size_t>(source)].keywords);
    if (rng.uniform01() < 0.3) w = misspell(std::move(w));
    return w;
  };

  Corpus corpus;
  for (const auto& intent : kIntents) corpus.labels.intern(IntentLabel::parse(intent.label));
  std::vector<LabelId> multi_ids;
  for (const auto& combo : kMulti) {
    std::vector<std::string> parts;
    for (int c : combo) parts.emplace_back(kIntents[static_cast<std::size_t>(c)].label);
    multi_ids.push_back(corpus.labels.intern(canonicalize_label(parts)));
  }
  corpus.gold.dataset_id = options.dataset_id;

  for (std::size_t n = 0; n < options.num_examples; ++n) {
    GoldExample ex;
    char id[32];
    std::snprintf(id, sizeof(id), "%s-%04zu", options.id_prefix.c_str(), n + 1);
    ex.id = id;
    std::vector<int> intents;
    if (rng.uniform01() < 0.1) {
      const std::size_t m = rng.below(kMulti.size());
      intents = kMulti[m];
      ex.gold = multi_ids[m];
    } else {
      const auto i = static_cast<int>(rng.below(kIntents.size()));
      intents = {i};
      ex.gold = LabelId{static_cast<std::uint32_t>(i)};
    }
    const std::size_t openers = 1 + rng.below(3);
    for (std::size_t k = 0; k < openers; ++k) ex.tokens.push_back(pick(kOpeners));
    for (int intent : intents) {
      const std::size_t count = 1 + rng.below(2);
      for (std::size_t k = 0; k < count; ++k) ex.tokens.push_back(keyword(intent));
    }
    if (rng.uniform01() < 0.6) {
      ex.tokens.push_back("from");
      ex.tokens.push_back(pick(kCities));
      ex.tokens.push_back("to");
      ex.tokens.push_back(pick(kCities));
    }
    const std::size_t filler = rng.below(3);
    for (std::size_t k = 0; k < filler; ++k) ex.tokens.push_back(pick(kFiller));
    // Mild word-order noise.
    if (ex.tokens.size() > 2 && rng.uniform01() < 0.3) {
      const std::size_t a = rng.below(ex.tokens.size());
      const std::size_t b = rng.below(ex.tokens.size());
      std::swap(ex.tokens[a], ex.tokens[b]);
    }
    corpus.gold.examples.push_back(std::move(ex));
  }
  return corpus;
}

}  // namespace layerens

namespace layerens {

std::vector<TrainedToyRun> train_toy_grid(const std::vector<ToyGridEntry>& grid,
                                          const GoldSet& train, const GoldSet& eval,
                                          const LabelSpace& labels, std::size_t jobs) {
  std::vector<TrainedToyRun> out(grid.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      try {
        out[i].params = train_toy_model(grid[i].config, train, labels);
        out[i].predictions = predict_toy(out[i].params, eval, labels, grid[i].run_id);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(jobs, grid.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
  return out;
}

}  // namespace layerens
