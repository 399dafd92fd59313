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
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "layerens/combiner.hpp"
#include "layerens/error.hpp"
#include "layerens/metrics.hpp"
#include "test_util.hpp"

namespace layerens {
namespace {

using testing::code_of;
using testing::make_labels;
using testing::TempDir;

TEST(DeterministicRng, ReproducibleAndInRange) {
  DeterministicRng a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.next_u64();
    EXPECT_EQ(x, b.next_u64());
    differs |= x != c.next_u64();
    const double u = a.uniform01();
    b.uniform01();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_LT(a.below(7), 7u);
    b.below(7);
  }
  EXPECT_TRUE(differs);
  // The engine sequence is pinned by the standard: 10000th output of the
  // default-seeded mt19937_64.
  std::mt19937_64 reference;
  reference.discard(9999);
  EXPECT_EQ(reference(), 9981545732273789042ull);
}

TEST(DeterministicRng, BelowIsRoughlyUniform) {
  DeterministicRng rng(1);
  std::vector<int> counts(5);
  for (int i = 0; i < 50000; ++i) ++counts[rng.below(5)];
  for (int c : counts) EXPECT_NEAR(c, 10000, 400);
}

TEST(DeterministicRng, ShuffleIsPermutation) {
  DeterministicRng rng(3);
  std::vector<int> v(100);
  std::iota(v.begin(), v.end(), 0);
  auto w = v;
  rng.shuffle(w);
  EXPECT_NE(v, w);
  std::sort(w.begin(), w.end());
  EXPECT_EQ(v, w);
}

TEST(DeriveSeed, SeparatesStreams) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t base : {0ull, 1ull, 2ull}) {
    for (std::uint64_t s = 0; s < 50; ++s) seen.insert(derive_seed(base, s));
  }
  EXPECT_EQ(seen.size(), 150u);
  EXPECT_EQ(derive_seed(5, 9), derive_seed(5, 9));
}

TEST(ExtractFeatures, Modes) {
  const std::vector<std::string> tokens = {"show", "me"};
  EXPECT_EQ(extract_features(tokens, FeatureMode::kBagOfWords, 3),
            (std::vector<std::string>{"w:show", "w:me"}));
  EXPECT_EQ(extract_features(tokens, FeatureMode::kCharNgram, 3),
            (std::vector<std::string>{"c:<sh", "c:sho", "c:how", "c:ow>", "c:<me", "c:me>"}));
  const auto both = extract_features({"ab"}, FeatureMode::kBoth, 2);
  EXPECT_EQ(both, (std::vector<std::string>{"w:ab", "c:<a", "c:ab", "c:b>"}));
  // Code points, not bytes.
  EXPECT_EQ(extract_features({"\xC3\xA9t\xC3\xA9"}, FeatureMode::kCharNgram, 4),
            (std::vector<std::string>{"c:<\xC3\xA9t\xC3\xA9", "c:\xC3\xA9t\xC3\xA9>"}));
  EXPECT_EQ(extract_features({"a"}, FeatureMode::kCharNgram, 4),
            (std::vector<std::string>{"c:<a>"}));
}

TEST(FeatureMode, Parse) {
  EXPECT_EQ(parse_feature_mode("bow"), FeatureMode::kBagOfWords);
  EXPECT_EQ(parse_feature_mode("char_ngram"), FeatureMode::kCharNgram);
  EXPECT_EQ(parse_feature_mode("both"), FeatureMode::kBoth);
  EXPECT_EQ(code_of([] { parse_feature_mode("cnn"); }), ErrorCode::kInvalidArgument);
}

// Two intents with disjoint vocabularies.
Corpus separable_corpus() {
  Corpus c;
  c.labels = make_labels({"flight", "meal"});
  c.gold.dataset_id = "sep";
  const std::vector<std::vector<std::string>> a = {
      {"fly", "to", "boston"}, {"flights", "denver"}, {"fly", "boston", "denver"}, {"to", "boston"}};
  const std::vector<std::vector<std::string>> b = {
      {"dinner", "served"}, {"snack", "menu"}, {"served", "snack"}, {"menu", "dinner", "please"}};
  for (std::size_t i = 0; i < 20; ++i) {
    c.gold.examples.push_back({"a" + std::to_string(i), a[i % a.size()], LabelId{0}});
    c.gold.examples.push_back({"b" + std::to_string(i), b[i % b.size()], LabelId{1}});
  }
  return c;
}

TEST(TrainToyModel, SeparableCorpusReachesFullTrainingAccuracy) {
  const Corpus c = separable_corpus();
  ToyModelConfig config;
  config.epochs = 50;
  const ModelParameters params = train_toy_model(config, c.gold, c.labels);
  const PredictionRun run = predict_toy(params, c.gold, c.labels, {"Sep", 1});
  std::vector<LabelId> predicted;
  for (std::size_t i = 0; i < c.gold.size(); ++i) predicted.push_back(argmax_vote(run, i).label);
  EXPECT_DOUBLE_EQ(accuracy(predicted, c.gold.gold_labels()), 100.0);
}

TEST(TrainToyModel, DeterministicAndSeedSensitive) {
  ToyCorpusOptions opts;
  opts.num_examples = 120;
  const Corpus noisy = generate_toy_corpus(opts);
  ToyModelConfig config;
  config.feature_mode = FeatureMode::kBoth;
  config.epochs = 4;
  config.seed = 1;
  const auto first = train_toy_model(config, noisy.gold, noisy.labels);
  const auto second = train_toy_model(config, noisy.gold, noisy.labels);
  EXPECT_EQ(serialize_parameters(first), serialize_parameters(second));
  config.seed = 2;
  const auto other = train_toy_model(config, noisy.gold, noisy.labels);
  EXPECT_EQ(first.vocabulary, other.vocabulary);
  EXPECT_NE(first.weights, other.weights);
}

TEST(TrainToyModel, Errors) {
  const Corpus c = separable_corpus();
  GoldSet empty;
  empty.dataset_id = "e";
  EXPECT_EQ(code_of([&] { train_toy_model({}, empty, c.labels); }), ErrorCode::kEmptyTrainSet);
  ToyModelConfig bad;
  bad.epochs = 0;
  EXPECT_EQ(code_of([&] { train_toy_model(bad, c.gold, c.labels); }), ErrorCode::kInvalidArgument);
  bad = {};
  bad.feature_mode = FeatureMode::kCharNgram;
  bad.ngram = 5;
  EXPECT_EQ(code_of([&] { validate(bad); }), ErrorCode::kInvalidArgument);
  bad = {};
  bad.sample_fraction = 0.0;
  EXPECT_EQ(code_of([&] { validate(bad); }), ErrorCode::kInvalidArgument);
}

TEST(PredictToy, ZeroWeightsGiveUniformRows) {
  const Corpus c = separable_corpus();
  ModelParameters params;
  params.labels = {"flight", "meal"};
  params.vocabulary = {"w:fly", "w:menu"};
  params.weights.assign(2 * 3, 0.0);
  const PredictionRun run = predict_toy(params, c.gold, c.labels, {"Zero", 1});
  for (std::size_t i = 0; i < run.matrix.rows(); ++i) {
    EXPECT_DOUBLE_EQ(run.matrix(i, 0), 0.5);
    EXPECT_DOUBLE_EQ(run.matrix(i, 1), 0.5);
  }
  const LabelSpace other = make_labels({"flight", "airfare"});
  EXPECT_EQ(code_of([&] { predict_toy(params, c.gold, other, {"Zero", 1}); }),
            ErrorCode::kShapeMismatch);
}

TEST(PredictToy, OutputLoadsBackCleanly) {
  TempDir dir;
  ToyCorpusOptions opts;
  opts.num_examples = 80;
  const Corpus c = generate_toy_corpus(opts);
  ToyModelConfig config;
  config.epochs = 3;
  const auto run = predict_toy(train_toy_model(config, c.gold, c.labels), c.gold, c.labels,
                               {"Toy", 1});
  write_run_directory(dir.path(), c.gold.dataset_id, std::vector<PredictionRun>{run});
  const RunSet loaded = load_run_set(dir / "manifest.json", c.gold, c.labels);
  EXPECT_EQ(loaded.runs()[0].matrix, run.matrix);
}

TEST(ModelParameters, SerializationRoundTrip) {
  TempDir dir;
  const Corpus c = separable_corpus();
  ToyModelConfig config;
  config.feature_mode = FeatureMode::kCharNgram;
  config.ngram = 2;
  config.epochs = 3;
  const auto params = train_toy_model(config, c.gold, c.labels);
  save_parameters(dir / "m.json", params);
  const auto loaded = load_parameters(dir / "m.json");
  EXPECT_EQ(loaded, params);
  EXPECT_EQ(code_of([] { parse_parameters("{\"format\": \"other\"}"); }), ErrorCode::kParseError);
}

GoldSet big_gold(std::size_t n, std::size_t c) {
  GoldSet g;
  g.dataset_id = "syn";
  for (std::size_t i = 0; i < n; ++i) {
    g.examples.push_back({"s" + std::to_string(i), {}, LabelId{static_cast<std::uint32_t>(i % c)}});
  }
  return g;
}

double run_accuracy(const PredictionRun& run, const GoldSet& gold) {
  std::vector<LabelId> p;
  for (std::size_t i = 0; i < gold.size(); ++i) p.push_back(argmax_vote(run, i).label);
  return accuracy(p, gold.gold_labels());
}

double ensemble_accuracy(const RunSet& runs, const GoldSet& gold, bool fallback) {
  std::vector<LabelId> p;
  std::vector<Vote> votes;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    votes.clear();
    for (const auto& run : runs.runs()) votes.push_back(argmax_vote(run, i));
    p.push_back(combine_votes_unchecked(votes, CombinerPolicy::kMaxOfSupporters, fallback).label);
  }
  return accuracy(p, gold.gold_labels());
}

TEST(SyntheticRuns, PerfectAccuracy) {
  const GoldSet gold = big_gold(500, 4);
  const LabelSpace labels = make_labels({"a", "b", "c", "d"});
  SyntheticPredictorConfig config;
  config.accuracy = 1.0;
  const RunSet runs = generate_synthetic_runs(config, 3, gold, labels);
  for (const auto& run : runs.runs()) EXPECT_DOUBLE_EQ(run_accuracy(run, gold), 100.0);
}

TEST(SyntheticRuns, IndependentMajorityMatchesBinomial) {
  const GoldSet gold = big_gold(10000, 5);
  const LabelSpace labels = make_labels({"a", "b", "c", "d", "e"});
  SyntheticPredictorConfig config;
  config.accuracy = 0.7;
  config.seed = 2024;
  const RunSet runs = generate_synthetic_runs(config, 3, gold, labels);
  const double oracle = 100.0 * (0.7 * 0.7 * 0.7 + 3 * 0.7 * 0.7 * 0.3);
  EXPECT_NEAR(ensemble_accuracy(runs, gold, false), oracle, 1.5);
}

TEST(SyntheticRuns, FullCorrelationAddsNothing) {
  const GoldSet gold = big_gold(3000, 4);
  const LabelSpace labels = make_labels({"a", "b", "c", "d"});
  SyntheticPredictorConfig config;
  config.accuracy = 0.65;
  config.correlation = 1.0;
  const RunSet runs = generate_synthetic_runs(config, 3, gold, labels);
  const double single = run_accuracy(runs.runs()[0], gold);
  for (const auto& run : runs.runs()) EXPECT_DOUBLE_EQ(run_accuracy(run, gold), single);
  EXPECT_DOUBLE_EQ(ensemble_accuracy(runs, gold, true), single);
}

TEST(SyntheticRuns, DiversityHelpsIndependentPredictors) {
  const GoldSet gold = big_gold(10000, 6);
  const LabelSpace labels = make_labels({"a", "b", "c", "d", "e", "f"});
  for (double acc : {0.6, 0.7, 0.8, 0.9}) {
    SyntheticPredictorConfig config;
    config.accuracy = acc;
    config.seed = 77;
    const RunSet runs = generate_synthetic_runs(config, 3, gold, labels);
    const double single = run_accuracy(runs.runs()[0], gold);
    EXPECT_GT(ensemble_accuracy(runs, gold, true), single) << acc;
  }
}

TEST(SyntheticRuns, ValidDeterministicRows) {
  const GoldSet gold = big_gold(200, 3);
  const LabelSpace labels = make_labels({"a", "b", "c"});
  SyntheticPredictorConfig config;
  config.correlation = 0.4;
  const RunSet a = generate_synthetic_runs(config, 4, gold, labels);
  const RunSet b = generate_synthetic_runs(config, 4, gold, labels);
  ASSERT_EQ(a.runs().size(), 4u);
  for (std::size_t r = 0; r < 4; ++r) {
    EXPECT_EQ(serialize_matrix(a.runs()[r].matrix), serialize_matrix(b.runs()[r].matrix));
    EXPECT_NO_THROW(parse_matrix(serialize_matrix(a.runs()[r].matrix), 200, 3));
  }
  EXPECT_EQ(code_of([&] { generate_synthetic_runs(config, 3, gold, make_labels({"a"})); }),
            ErrorCode::kDegenerateLabelSpace);
  config.accuracy = 1.2;
  EXPECT_EQ(code_of([&] { generate_synthetic_runs(config, 3, gold, labels); }),
            ErrorCode::kInvalidArgument);
}

TEST(ToyGrid, TwelveModelsThreeInits) {
  const auto grid = toy_grid(1);
  ASSERT_EQ(grid.size(), 36u);
  std::set<std::string> models;
  std::set<std::uint64_t> seeds;
  for (const auto& e : grid) {
    models.insert(e.run_id.model_id);
    seeds.insert(e.config.seed);
    EXPECT_GE(e.run_id.init_index, 1);
    EXPECT_LE(e.run_id.init_index, 3);
    EXPECT_NO_THROW(validate(e.config));
  }
  EXPECT_EQ(models.size(), 12u);
  EXPECT_EQ(seeds.size(), 36u);
}

TEST(ToyCorpus, DeterministicWithFixedLabelOrder) {
  ToyCorpusOptions opts;
  const Corpus a = generate_toy_corpus(opts);
  const Corpus b = generate_toy_corpus(opts);
  EXPECT_EQ(a.gold.size(), 500u);
  EXPECT_EQ(serialize_gold(a.gold, a.labels), serialize_gold(b.gold, b.labels));
  EXPECT_EQ(a.labels.size(), 10u);
  EXPECT_EQ(a.labels.labels()[0].text(), "flight");
  EXPECT_EQ(a.labels.labels()[8].text(), "airfare+flight");
  std::set<std::uint32_t> used;
  for (const auto& e : a.gold.examples) used.insert(e.gold.value);
  EXPECT_EQ(used.size(), 10u);
  opts.seed = 8;
  EXPECT_NE(serialize_gold(generate_toy_corpus(opts).gold, a.labels),
            serialize_gold(a.gold, a.labels));
}

TEST(TrainToyGrid, ParallelMatchesSerial) {
  ToyCorpusOptions opts;
  opts.num_examples = 60;
  const Corpus c = generate_toy_corpus(opts);
  auto grid = toy_grid(5);
  grid.resize(6);
  for (auto& e : grid) e.config.epochs = 2;
  const auto serial = train_toy_grid(grid, c.gold, c.gold, c.labels, 1);
  const auto parallel = train_toy_grid(grid, c.gold, c.gold, c.labels, 4);
  ASSERT_EQ(serial.size(), 6u);
  for (std::size_t i = 0; i < serial.size(); ++i) {
    EXPECT_EQ(serial[i].params, parallel[i].params);
    EXPECT_EQ(serial[i].predictions.matrix, parallel[i].predictions.matrix);
    EXPECT_EQ(serial[i].predictions.run_id, grid[i].run_id);
  }
}

}  // namespace
}  // namespace layerens
