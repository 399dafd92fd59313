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

#include "layerens/prediction_store.hpp"

#include <cmath>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "layerens/error.hpp"
#include "test_util.hpp"

namespace layerens {
namespace {

using testing::code_of;
using testing::make_gold;
using testing::make_labels;
using testing::make_matrix;
using testing::make_run;
using testing::TempDir;
using testing::write_text;

std::vector<MatrixIssue> scan(std::string_view text, std::size_t rows, std::size_t cols) {
  return scan_matrix(text, rows, cols);
}

TEST(ParseMatrix, WellFormed) {
  const ProbabilityMatrix m = parse_matrix("0.6,0.4\n0.1,0.9\n", 2, 2);
  EXPECT_EQ(m, make_matrix({{0.6, 0.4}, {0.1, 0.9}}));
}

TEST(ParseMatrix, RenormalizesWithinTolerance) {
  const ProbabilityMatrix m = parse_matrix("0.5,0.5000004\n", 1, 2);
  const double sum = 0.5 + 0.5000004;
  EXPECT_DOUBLE_EQ(m(0, 0), 0.5 / sum);
  EXPECT_DOUBLE_EQ(m(0, 1), 0.5000004 / sum);
  EXPECT_NEAR(m(0, 0) + m(0, 1), 1.0, 1e-15);
}

TEST(ParseMatrix, KeepsExactRowsBitForBit) {
  // 0.1 + 0.2 + 0.7 is not exactly 1 in binary but within rounding slack.
  const ProbabilityMatrix m = parse_matrix("0.1,0.2,0.7\n", 1, 3);
  EXPECT_EQ(m(0, 0), 0.1);
  EXPECT_EQ(m(0, 1), 0.2);
  EXPECT_EQ(m(0, 2), 0.7);
}

TEST(ParseMatrix, RowSumViolation) {
  EXPECT_EQ(code_of([] { parse_matrix("0.7,0.7\n", 1, 2); }), ErrorCode::kRowSumViolation);
  EXPECT_EQ(code_of([] { parse_matrix("0.5,0.49\n", 1, 2); }), ErrorCode::kRowSumViolation);
}

TEST(ParseMatrix, ValueErrors) {
  EXPECT_EQ(code_of([] { parse_matrix("-0.1,1.1\n", 1, 2); }), ErrorCode::kNegativeProbability);
  EXPECT_EQ(code_of([] { parse_matrix("1.5,-0.5\n", 1, 2); }),
            ErrorCode::kProbabilityOutOfRange);
  EXPECT_EQ(code_of([] { parse_matrix("nan,0.5\n", 1, 2); }), ErrorCode::kParseError);
  EXPECT_EQ(code_of([] { parse_matrix("inf,0\n", 1, 2); }), ErrorCode::kParseError);
  EXPECT_EQ(code_of([] { parse_matrix("0.5;0.5\n", 1, 2); }), ErrorCode::kParseError);
  EXPECT_EQ(code_of([] { parse_matrix("0.5,,0.5\n", 1, 3); }), ErrorCode::kParseError);
}

TEST(ParseMatrix, ShapeErrors) {
  EXPECT_EQ(code_of([] { parse_matrix("0.5,0.5\n", 2, 2); }), ErrorCode::kShapeMismatch);
  EXPECT_EQ(code_of([] { parse_matrix("1\n", 1, 2); }), ErrorCode::kShapeMismatch);
  EXPECT_EQ(code_of([] { parse_matrix("0.5,0.5\n0.5,0.5\n", 1, 2); }),
            ErrorCode::kShapeMismatch);
}

TEST(ScanMatrix, ReportsEveryIssueWithCoordinates) {
  const auto issues = scan("0.5,0.5\n0.2,-0.1,0.9\n0.7,0.7,0\n", 4, 3);
  ASSERT_GE(issues.size(), 4u);
  EXPECT_EQ(issues[0].code, ErrorCode::kShapeMismatch);
  EXPECT_NE(issues[0].message.find("4"), std::string::npos);
  EXPECT_NE(issues[0].message.find("3 rows"), std::string::npos);
  bool saw_negative = false, saw_sum = false, saw_columns = false;
  for (const auto& issue : issues) {
    if (issue.code == ErrorCode::kNegativeProbability) {
      saw_negative = true;
      EXPECT_EQ(issue.row, 2u);
      EXPECT_EQ(issue.col, 2u);
      EXPECT_NE(issue.message.find("(2,2)"), std::string::npos);
    }
    if (issue.code == ErrorCode::kRowSumViolation) saw_sum = issue.row == 3;
    if (issue.code == ErrorCode::kShapeMismatch && issue.row == 1) saw_columns = true;
  }
  EXPECT_TRUE(saw_negative);
  EXPECT_TRUE(saw_sum);
  EXPECT_TRUE(saw_columns);
}

TEST(ScanMatrix, RowCountMessageNamesBothCounts) {
  std::string text;
  for (int i = 0; i < 892; ++i) text += "0.25,0.75\n";
  const auto issues = scan(text, 893, 2);
  ASSERT_EQ(issues.size(), 1u);
  EXPECT_EQ(issues[0].code, ErrorCode::kShapeMismatch);
  EXPECT_NE(issues[0].message.find("893"), std::string::npos);
  EXPECT_NE(issues[0].message.find("892"), std::string::npos);
}

TEST(SerializeMatrix, BitExactRoundTrip) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ProbabilityMatrix m(200, 7);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double sum = 0;
    for (std::size_t j = 0; j < m.cols(); ++j) sum += (m(i, j) = u(rng));
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) /= sum;
  }
  // Normalized rows can still carry a few ulps of sum error; take whatever
  // the parser makes of them and require that to be a fixed point.
  const ProbabilityMatrix once = parse_matrix(serialize_matrix(m), m.rows(), m.cols());
  const ProbabilityMatrix twice = parse_matrix(serialize_matrix(once), m.rows(), m.cols());
  EXPECT_EQ(once, twice);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) EXPECT_NEAR(once(i, j), m(i, j), 1e-15);
  }
  EXPECT_EQ(serialize_matrix(make_matrix({{0.6, 0.4}, {0.1, 0.9}})), "0.6,0.4\n0.1,0.9\n");
}

TEST(ArgmaxVote, Examples) {
  const std::vector<double> a = {0.1, 0.7, 0.2};
  EXPECT_EQ(argmax_vote(a), (Vote{LabelId{1}, 0.7}));
  const std::vector<double> b = {0.5, 0.5};
  EXPECT_EQ(argmax_vote(b), (Vote{LabelId{0}, 0.5}));
  const std::vector<double> c = {1.0, 0.0};
  EXPECT_EQ(argmax_vote(c), (Vote{LabelId{0}, 1.0}));
  EXPECT_EQ(code_of([] { argmax_vote(std::vector<double>{}); }), ErrorCode::kIndexOutOfRange);
}

TEST(ArgmaxVote, ConfidenceEqualsRowMax) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::string text;
  for (int i = 0; i < 300; ++i) {
    double v[4], s = 0;
    for (double& x : v) s += (x = u(rng));
    for (int j = 0; j < 4; ++j) text += format_double(v[j] / s * (1 + 3e-7)) + (j < 3 ? "," : "\n");
  }
  const PredictionRun run = make_run("M", 1, parse_matrix(text, 300, 4));
  for (std::size_t i = 0; i < 300; ++i) {
    double mx = 0;
    for (double x : run.matrix.row(i)) mx = std::max(mx, x);
    EXPECT_NEAR(argmax_vote(run, i).confidence, mx, 1e-12);
  }
  EXPECT_EQ(code_of([&] { argmax_vote(run, 300); }), ErrorCode::kIndexOutOfRange);
}

TEST(ModelId, Validation) {
  EXPECT_NO_THROW(validate_model_id("ACharBiLSTM"));
  EXPECT_NO_THROW(validate_model_id("toy_Char3-A.v2"));
  for (const char* bad : {"", "a b", "a,b", "a/b", "a\"b", "a\tb"}) {
    EXPECT_EQ(code_of([&] { validate_model_id(bad); }), ErrorCode::kInvalidIdentifier) << bad;
  }
}

TEST(RunSet, GroupsByModelInInitOrder) {
  std::vector<PredictionRun> runs;
  for (const char* model : {"GRU", "CNN", "LSTM"}) {
    for (int init : {3, 1, 2}) {
      runs.push_back(make_run(model, init, make_matrix({{0.5, 0.5}})));
    }
  }
  const RunSet set("d", runs);
  EXPECT_EQ(set.runs().size(), 9u);
  EXPECT_EQ(set.by_model().size(), 3u);
  EXPECT_EQ(set.model_ids(), (std::vector<std::string>{"CNN", "GRU", "LSTM"}));
  for (const auto& [model, indices] : set.by_model()) {
    ASSERT_EQ(indices.size(), 3u);
    for (std::size_t k = 0; k < 3; ++k) {
      EXPECT_EQ(set.runs()[indices[k]].run_id.init_index, static_cast<int>(k + 1));
    }
  }
  EXPECT_EQ(set.run({"GRU", 2}).run_id, (RunId{"GRU", 2}));
  EXPECT_EQ(code_of([&] { set.run({"GRU", 4}); }), ErrorCode::kMissingRun);
}

TEST(RunSet, Errors) {
  const auto m = make_matrix({{0.5, 0.5}});
  EXPECT_EQ(code_of([&] { RunSet("d", {make_run("A", 1, m), make_run("A", 1, m)}); }),
            ErrorCode::kDuplicateRunId);
  EXPECT_EQ(code_of([&] { RunSet("d", {make_run("A", 1, m), make_run("B", 1, m, "other")}); }),
            ErrorCode::kDatasetMismatch);
  EXPECT_EQ(code_of([&] {
              RunSet("d", {make_run("A", 1, m), make_run("B", 1, make_matrix({{1.0, 0.0}, {1.0, 0.0}}))});
            }),
            ErrorCode::kShapeMismatch);
}

TEST(Manifest, LoadResolvesRelativePaths) {
  TempDir dir;
  write_text(dir / "sub/manifest.json",
             "{\"dataset_id\": \"d\", \"runs\": [{\"model_id\": \"CNN\", \"init_index\": 1, "
             "\"path\": \"runs/cnn1.csv\"}]}");
  write_text(dir / "sub/runs/cnn1.csv", "0.6,0.4\n0.1,0.9\n");
  const Manifest manifest = load_manifest(dir / "sub/manifest.json");
  ASSERT_EQ(manifest.runs.size(), 1u);
  EXPECT_EQ(manifest.runs[0].path, dir / "sub/runs/cnn1.csv");

  const LabelSpace labels = make_labels({"a", "b"});
  const GoldSet gold = make_gold({0, 1});
  const RunSet set = load_run_set(dir / "sub/manifest.json", gold, labels);
  EXPECT_EQ(set.runs()[0].matrix, make_matrix({{0.6, 0.4}, {0.1, 0.9}}));
}

TEST(Manifest, Errors) {
  TempDir dir;
  write_text(dir / "m1.json", "{\"runs\": []}");
  EXPECT_EQ(code_of([&] { load_manifest(dir / "m1.json"); }), ErrorCode::kParseError);
  write_text(dir / "m2.json",
             "{\"dataset_id\": \"d\", \"runs\": [{\"model_id\": \"a b\", \"init_index\": 1, "
             "\"path\": \"x.csv\"}]}");
  EXPECT_EQ(code_of([&] { load_manifest(dir / "m2.json"); }), ErrorCode::kInvalidIdentifier);
  write_text(dir / "m3.json",
             "{\"dataset_id\": \"d\", \"runs\": [{\"model_id\": \"A\", \"init_index\": 0, "
             "\"path\": \"x.csv\"}]}");
  EXPECT_EQ(code_of([&] { load_manifest(dir / "m3.json"); }), ErrorCode::kParseError);
  EXPECT_EQ(code_of([&] { load_manifest(dir / "absent.json"); }), ErrorCode::kIoError);

  write_text(dir / "m4.json",
             "{\"dataset_id\": \"other\", \"runs\": [{\"model_id\": \"A\", \"init_index\": 1, "
             "\"path\": \"x.csv\"}]}");
  write_text(dir / "x.csv", "1,0\n");
  EXPECT_EQ(code_of([&] { load_run_set(dir / "m4.json", make_gold({0}), make_labels({"a", "b"})); }),
            ErrorCode::kDatasetMismatch);
}

TEST(WriteRunDirectory, RoundTrips) {
  TempDir dir;
  const std::vector<PredictionRun> runs = {
      make_run("CNN", 1, make_matrix({{0.6, 0.4}, {0.1, 0.9}})),
      make_run("CNN", 2, make_matrix({{0.3, 0.7}, {1.0 / 3.0, 2.0 / 3.0}})),
      make_run("GRU", 1, make_matrix({{1.0, 0.0}, {0.0, 1.0}}))};
  const Manifest written = write_run_directory(dir.path(), "d", runs);
  EXPECT_EQ(written.runs.size(), 3u);
  EXPECT_EQ(written.runs[0].path, std::filesystem::path("runs/CNN_1.csv"));
  const RunSet loaded =
      load_run_set(dir / "manifest.json", make_gold({0, 1}), make_labels({"a", "b"}));
  ASSERT_EQ(loaded.runs().size(), 3u);
  for (std::size_t r = 0; r < runs.size(); ++r) {
    EXPECT_EQ(loaded.run(runs[r].run_id).matrix, runs[r].matrix);
  }
}

}  // namespace
}  // namespace layerens
