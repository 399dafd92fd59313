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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <set>

#include "io.hpp"
#include "json.hpp"

namespace layerens {
namespace {

using nlohmann::json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::string shape_text(std::size_t rows, std::size_t cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

std::string at_text(std::size_t row, std::size_t col) {
  return "(" + std::to_string(row) + "," + std::to_string(col) + ")";
}

}  // namespace

std::string to_string(const RunId& id) {
  return id.model_id + "#" + std::to_string(id.init_index);
}

void validate_model_id(std::string_view model_id) {
  if (model_id.empty()) fail(ErrorCode::kInvalidIdentifier, "empty model id");
  for (unsigned char c : model_id) {
    if (c <= 0x20 || c == 0x7F || c == ',' || c == '/' || c == '"') {
      fail(ErrorCode::kInvalidIdentifier,
           "model id may not contain whitespace, control characters, ',', '/' or '\"': " +
               std::string(model_id));
    }
  }
}

std::string format_double(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

std::vector<MatrixIssue> scan_matrix(std::string_view csv_text, std::size_t expected_rows,
                                     std::size_t expected_cols, ProbabilityMatrix* out) {
  std::vector<MatrixIssue> issues;
  ProbabilityMatrix matrix(expected_rows, expected_cols);
  const double exact_slack =
      static_cast<double>(std::max<std::size_t>(expected_cols, 1)) *
      std::numeric_limits<double>::epsilon();

  std::size_t row = 0;
  std::size_t start = 0;
  std::vector<double> values;
  while (start < csv_text.size()) {
    std::size_t end = csv_text.find('\n', start);
    if (end == std::string_view::npos) end = csv_text.size();
    const std::string_view line = csv_text.substr(start, end - start);
    start = end + 1;
    ++row;

    values.clear();
    bool row_ok = true;
    std::size_t col = 0;
    std::size_t field_start = 0;
    while (true) {
      const std::size_t comma = line.find(',', field_start);
      const std::string_view field =
          trim(line.substr(field_start, comma == std::string_view::npos
                                            ? std::string_view::npos
                                            : comma - field_start));
      ++col;
      std::string_view digits = field;
      if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
      if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size() ||
          !std::isfinite(v)) {
        issues.push_back({ErrorCode::kParseError, row, col,
                          "not a finite decimal at " + at_text(row, col) + ": '" +
                              std::string(field) + "'"});
        row_ok = false;
      } else if (v < 0.0) {
        issues.push_back({ErrorCode::kNegativeProbability, row, col,
                          "negative probability " + std::string(field) + " at " +
                              at_text(row, col)});
        row_ok = false;
      } else if (v > 1.0 + kRowSumTolerance) {
        issues.push_back({ErrorCode::kProbabilityOutOfRange, row, col,
                          "probability above 1: " + std::string(field) + " at " +
                              at_text(row, col)});
        row_ok = false;
      }
      values.push_back(v);
      if (comma == std::string_view::npos) break;
      field_start = comma + 1;
    }

    if (values.size() != expected_cols) {
      issues.push_back({ErrorCode::kShapeMismatch, row, 0,
                        "row " + std::to_string(row) + " has " +
                            std::to_string(values.size()) + " columns, expected " +
                            std::to_string(expected_cols)});
      row_ok = false;
    }
    if (!row_ok) continue;

    double sum = 0.0;
    for (double v : values) sum += v;
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      issues.push_back({ErrorCode::kRowSumViolation, row, 0,
                        "row " + std::to_string(row) + " sums to " + format_double(sum)});
      continue;
    }
    const bool renormalize = std::abs(sum - 1.0) > exact_slack;
    if (row <= expected_rows) {
      auto dst = matrix.row(row - 1);
      for (std::size_t j = 0; j < expected_cols; ++j) {
        dst[j] = renormalize ? values[j] / sum : values[j];
      }
    }
  }

  if (row != expected_rows) {
    issues.insert(issues.begin(),
                  {ErrorCode::kShapeMismatch, 0, 0,
                   "expected " + shape_text(expected_rows, expected_cols) + " matrix, got " +
                       std::to_string(row) + " rows"});
  }
  if (issues.empty() && out != nullptr) *out = std::move(matrix);
  return issues;
}

ProbabilityMatrix parse_matrix(std::string_view csv_text, std::size_t expected_rows,
                               std::size_t expected_cols) {
  ProbabilityMatrix matrix;
  auto issues = scan_matrix(csv_text, expected_rows, expected_cols, &matrix);
  if (!issues.empty()) fail(issues.front().code, issues.front().message);
  return matrix;
}

std::string serialize_matrix(const ProbabilityMatrix& matrix) {
  std::string out;
  out.reserve(matrix.rows() * matrix.cols() * 20);
  char buf[64];
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    for (std::size_t j = 0; j < matrix.cols(); ++j) {
      if (j > 0) out += ',';
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), matrix(i, j));
      out.append(buf, ptr);
    }
    out += '\n';
  }
  return out;
}

void save_matrix(const std::filesystem::path& path, const ProbabilityMatrix& matrix) {
  internal::write_file(path, serialize_matrix(matrix));
}

Manifest load_manifest(const std::filesystem::path& path) {
  const std::string text = internal::read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kParseError, path.string() + ": " + e.what());
  }
  const auto bad = [&](const std::string& what) {
    fail(ErrorCode::kParseError, path.string() + ": " + what);
  };
  if (!doc.is_object()) bad("manifest must be a JSON object");
  if (!doc.contains("dataset_id") || !doc["dataset_id"].is_string()) {
    bad("missing string field \"dataset_id\"");
  }
  if (!doc.contains("runs") || !doc["runs"].is_array()) bad("missing list field \"runs\"");

  Manifest manifest;
  manifest.dataset_id = doc["dataset_id"].get<std::string>();
  const auto base = path.parent_path();
  std::size_t index = 0;
  for (const auto& entry : doc["runs"]) {
    const std::string where = "runs[" + std::to_string(index++) + "]";
    if (!entry.is_object()) bad(where + " must be an object");
    if (!entry.contains("model_id") || !entry["model_id"].is_string()) {
      bad(where + ": missing string \"model_id\"");
    }
    if (!entry.contains("init_index") || !entry["init_index"].is_number_integer()) {
      bad(where + ": missing integer \"init_index\"");
    }
    if (!entry.contains("path") || !entry["path"].is_string()) {
      bad(where + ": missing string \"path\"");
    }
    ManifestEntry e;
    e.run_id.model_id = entry["model_id"].get<std::string>();
    validate_model_id(e.run_id.model_id);
    const auto init = entry["init_index"].get<long long>();
    if (init < 1 || init > std::numeric_limits<int>::max()) {
      bad(where + ": init_index must be a positive integer");
    }
    e.run_id.init_index = static_cast<int>(init);
    std::filesystem::path p = entry["path"].get<std::string>();
    e.path = p.is_absolute() ? p : base / p;
    manifest.runs.push_back(std::move(e));
  }
  return manifest;
}

std::string serialize_manifest(const Manifest& manifest) {
  json doc;
  doc["dataset_id"] = manifest.dataset_id;
  doc["runs"] = json::array();
  for (const auto& e : manifest.runs) {
    doc["runs"].push_back({{"model_id", e.run_id.model_id},
                           {"init_index", e.run_id.init_index},
                           {"path", e.path.generic_string()}});
  }
  return doc.dump(2) + "\n";
}

void save_manifest(const std::filesystem::path& path, const Manifest& manifest) {
  internal::write_file(path, serialize_manifest(manifest));
}

PredictionRun load_run(const ManifestEntry& entry, std::string_view manifest_dataset_id,
                       const GoldSet& gold, const LabelSpace& labels) {
  if (manifest_dataset_id != gold.dataset_id) {
    fail(ErrorCode::kDatasetMismatch, "manifest dataset '" + std::string(manifest_dataset_id) +
                                          "' does not match corpus dataset '" +
                                          gold.dataset_id + "'");
  }
  validate_model_id(entry.run_id.model_id);
  const std::string text = internal::read_file(entry.path);
  PredictionRun run;
  run.run_id = entry.run_id;
  run.dataset_id = gold.dataset_id;
  try {
    run.matrix = parse_matrix(text, gold.size(), labels.size());
  } catch (const Error& e) {
    fail(e.code(), entry.path.string() + ": " + e.what());
  }
  return run;
}

RunSet load_run_set(const std::filesystem::path& manifest_path, const GoldSet& gold,
                    const LabelSpace& labels) {
  const Manifest manifest = load_manifest(manifest_path);
  std::vector<PredictionRun> runs;
  runs.reserve(manifest.runs.size());
  for (const auto& entry : manifest.runs) {
    runs.push_back(load_run(entry, manifest.dataset_id, gold, labels));
  }
  return RunSet(manifest.dataset_id, std::move(runs));
}

RunSet::RunSet(std::string dataset_id, std::vector<PredictionRun> runs)
    : dataset_id_(std::move(dataset_id)), runs_(std::move(runs)) {
  std::set<RunId> seen;
  for (std::size_t i = 0; i < runs_.size(); ++i) {
    const auto& run = runs_[i];
    if (run.dataset_id != dataset_id_) {
      fail(ErrorCode::kDatasetMismatch, "run " + to_string(run.run_id) + " belongs to '" +
                                            run.dataset_id + "', expected '" + dataset_id_ +
                                            "'");
    }
    if (run.matrix.rows() != runs_.front().matrix.rows() ||
        run.matrix.cols() != runs_.front().matrix.cols()) {
      fail(ErrorCode::kShapeMismatch,
           "run " + to_string(run.run_id) + " is " +
               shape_text(run.matrix.rows(), run.matrix.cols()) + ", expected " +
               shape_text(runs_.front().matrix.rows(), runs_.front().matrix.cols()));
    }
    if (!seen.insert(run.run_id).second) {
      fail(ErrorCode::kDuplicateRunId, "duplicate run " + to_string(run.run_id));
    }
    by_model_[run.run_id.model_id].push_back(i);
  }
  for (auto& [model, indices] : by_model_) {
    std::sort(indices.begin(), indices.end(), [&](std::size_t a, std::size_t b) {
      return runs_[a].run_id.init_index < runs_[b].run_id.init_index;
    });
  }
}

std::vector<std::string> RunSet::model_ids() const {
  std::vector<std::string> ids;
  ids.reserve(by_model_.size());
  for (const auto& [model, indices] : by_model_) ids.push_back(model);
  return ids;
}

const PredictionRun& RunSet::run(const RunId& id) const {
  auto it = by_model_.find(id.model_id);
  if (it != by_model_.end()) {
    for (std::size_t i : it->second) {
      if (runs_[i].run_id.init_index == id.init_index) return runs_[i];
    }
  }
  fail(ErrorCode::kMissingRun, "run " + to_string(id) + " not in run set");
}

std::size_t RunSet::num_examples() const noexcept {
  return runs_.empty() ? 0 : runs_.front().matrix.rows();
}

std::size_t RunSet::num_labels() const noexcept {
  return runs_.empty() ? 0 : runs_.front().matrix.cols();
}

Vote argmax_vote(std::span<const double> row) {
  if (row.empty()) fail(ErrorCode::kIndexOutOfRange, "argmax of an empty row");
  std::size_t best = 0;
  for (std::size_t j = 1; j < row.size(); ++j) {
    if (row[j] > row[best]) best = j;
  }
  return Vote{LabelId{static_cast<std::uint32_t>(best)}, row[best]};
}

Vote argmax_vote(const PredictionRun& run, std::size_t example_index) {
  if (example_index >= run.matrix.rows()) {
    fail(ErrorCode::kIndexOutOfRange, "example " + std::to_string(example_index) +
                                          " outside run of " +
                                          std::to_string(run.matrix.rows()) + " examples");
  }
  return argmax_vote(run.matrix.row(example_index));
}

}  // namespace layerens

namespace layerens {

Manifest write_run_directory(const std::filesystem::path& out_dir, const std::string& dataset_id,
                             std::span<const PredictionRun> runs) {
  Manifest manifest;
  manifest.dataset_id = dataset_id;
  for (const auto& run : runs) {
    const std::filesystem::path rel = std::filesystem::path("runs") /
                                      (run.run_id.model_id + "_" +
                                       std::to_string(run.run_id.init_index) + ".csv");
    save_matrix(out_dir / rel, run.matrix);
    manifest.runs.push_back({run.run_id, rel});
  }
  save_manifest(out_dir / "manifest.json", manifest);
  return manifest;
}

}  // namespace layerens
