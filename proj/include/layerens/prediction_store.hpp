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

// Per-run softmax prediction matrices.
//
// A manifest lists the runs of one dataset:
//   {"dataset_id": "atis",
//    "runs": [{"model_id": "GRU", "init_index": 1, "path": "gru_1.csv"}, ...]}
// Relative paths resolve against the manifest's directory. Each matrix file
// is headerless CSV with one row per gold example (file order) and one column
// per label (label space order).

#ifndef LAYERENS_PREDICTION_STORE_HPP_
#define LAYERENS_PREDICTION_STORE_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "layerens/corpus.hpp"
#include "layerens/error.hpp"

namespace layerens {

inline constexpr double kRowSumTolerance = 1e-6;

struct RunId {
  std::string model_id;
  int init_index = 1;

  friend bool operator==(const RunId&, const RunId&) = default;
  friend auto operator<=>(const RunId&, const RunId&) = default;
};

std::string to_string(const RunId& id);

// Throws kInvalidIdentifier for ids that would break the CSV/report formats.
void validate_model_id(std::string_view model_id);

// Dense row-major N x C matrix.
class ProbabilityMatrix {
 public:
  ProbabilityMatrix() = default;
  ProbabilityMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }

  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }

  const std::vector<double>& data() const noexcept { return data_; }

  friend bool operator==(const ProbabilityMatrix&, const ProbabilityMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct Vote {
  LabelId label;
  double confidence = 0.0;

  friend bool operator==(const Vote&, const Vote&) = default;
};

struct PredictionRun {
  RunId run_id;
  std::string dataset_id;
  ProbabilityMatrix matrix;
};

class RunSet {
 public:
  RunSet() = default;
  // Throws kDatasetMismatch, kShapeMismatch, kDuplicateRunId.
  RunSet(std::string dataset_id, std::vector<PredictionRun> runs);

  const std::string& dataset_id() const noexcept { return dataset_id_; }
  const std::vector<PredictionRun>& runs() const noexcept { return runs_; }

  // model_id -> indices into runs(), ordered by init_index.
  const std::map<std::string, std::vector<std::size_t>>& by_model() const noexcept {
    return by_model_;
  }
  std::vector<std::string> model_ids() const;

  // Throws kMissingRun.
  const PredictionRun& run(const RunId& id) const;

  std::size_t num_examples() const noexcept;
  std::size_t num_labels() const noexcept;

 private:
  std::string dataset_id_;
  std::vector<PredictionRun> runs_;
  std::map<std::string, std::vector<std::size_t>> by_model_;
};

struct ManifestEntry {
  RunId run_id;
  std::filesystem::path path;
};

struct Manifest {
  std::string dataset_id;
  std::vector<ManifestEntry> runs;
};

// Throws kIoError, kParseError, kInvalidIdentifier.
Manifest load_manifest(const std::filesystem::path& path);
std::string serialize_manifest(const Manifest& manifest);
void save_manifest(const std::filesystem::path& path, const Manifest& manifest);

// Writes runs/<model_id>_<init_index>.csv per run plus manifest.json (with
// paths relative to out_dir) and returns the manifest.
Manifest write_run_directory(const std::filesystem::path& out_dir, const std::string& dataset_id,
                             std::span<const PredictionRun> runs);

// Parses and validates matrix text against the gold set and label space.
// Rows within kRowSumTolerance of 1 are renormalized; rows deviating only by
// summation rounding are kept bit-exact.
// Throws kParseError, kShapeMismatch, kNegativeProbability,
// kProbabilityOutOfRange, kRowSumViolation. Row/column numbers in messages
// are 1-based.
ProbabilityMatrix parse_matrix(std::string_view csv_text, std::size_t expected_rows,
                               std::size_t expected_cols);

// One violation found while scanning a matrix file. row/col are 1-based; 0
// means "not applicable" (e.g. a row-count mismatch has no column).
struct MatrixIssue {
  ErrorCode code;
  std::size_t row = 0;
  std::size_t col = 0;
  std::string message;
};

// Non-throwing scan that reports every violation instead of the first. On
// an empty result `out` (if given) holds the validated matrix.
std::vector<MatrixIssue> scan_matrix(std::string_view csv_text, std::size_t expected_rows,
                                     std::size_t expected_cols,
                                     ProbabilityMatrix* out = nullptr);

// Throws everything parse_matrix does plus kIoError and kDatasetMismatch.
PredictionRun load_run(const ManifestEntry& entry, std::string_view manifest_dataset_id,
                       const GoldSet& gold, const LabelSpace& labels);

RunSet load_run_set(const std::filesystem::path& manifest_path, const GoldSet& gold,
                    const LabelSpace& labels);

// Shortest round-trip decimals (at most 17 significant digits), so
// parse(serialize(m)) == m bit for bit.
std::string serialize_matrix(const ProbabilityMatrix& matrix);
void save_matrix(const std::filesystem::path& path, const ProbabilityMatrix& matrix);

// Lowest column wins exact ties. Throws kIndexOutOfRange.
Vote argmax_vote(const PredictionRun& run, std::size_t example_index);
Vote argmax_vote(std::span<const double> row);

// Shortest text that parses back to the same double.
std::string format_double(double value);

}  // namespace layerens

#endif  // LAYERENS_PREDICTION_STORE_HPP_
