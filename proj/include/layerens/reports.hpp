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

// Input validation, sweep report documents, and the published-score check.

#ifndef LAYERENS_REPORTS_HPP_
#define LAYERENS_REPORTS_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "layerens/corpus.hpp"
#include "layerens/enumeration.hpp"
#include "layerens/error.hpp"
#include "layerens/metrics.hpp"

namespace layerens {

inline constexpr int kReportSchemaVersion = 1;

// ---- validate ---------------------------------------------------------

struct Diagnostic {
  ErrorCode code = ErrorCode::kOk;
  std::string file;
  std::size_t row = 0;  // 1-based, 0 = n/a
  std::size_t col = 0;  // 1-based, 0 = n/a
  std::string message;

  // "<file>:<row>:<col>: <CodeName>: <message>", omitting absent parts.
  std::string to_string() const;
};

// Never throws for data problems; every problem becomes a diagnostic.
std::vector<Diagnostic> validate_inputs(const std::filesystem::path& manifest_path,
                                        const std::filesystem::path& corpus_path,
                                        const LoadGoldOptions& gold_options = {});

// ---- sweep reports ----------------------------------------------------

struct ReportGains {
  GainMode mode = GainMode::kVsMean;
  double first_layer = 0.0;
  // Mean over all enumerated ensembles of (F1 - aggregate of member
  // first-layer F1s). Not checkable against published numbers.
  double second_layer = 0.0;
  double best_individual_f1 = 0.0;
  RunId best_individual;
  double total = 0.0;
  // Absent when every ensemble has a character model (or none has).
  std::optional<double> best_without_char_f1;
  std::optional<double> character = std::nullopt;
};

ReportGains compute_gains(const SweepReport& report, GainMode mode);

// JSON document: options, first-layer table, gains, every result in
// canonical enumeration order (each carrying its rank) and the retained top
// results with per-example predictions.
std::string serialize_report_json(const SweepReport& report, const LabelSpace& labels,
                                  GainMode mode);
// Header "members,size,f1_percent"; members are "/"-joined; rows follow the
// canonical enumeration order.
std::string serialize_report_csv(const SweepReport& report);

struct ReportCsvRow {
  std::vector<std::string> members;
  std::size_t size = 0;
  std::string f1_percent;
};
// Throws kParseError.
std::vector<ReportCsvRow> parse_report_csv(std::string_view text);

// "BEST <members> F1=<xx.xx>"
std::string best_line(const SweepReport& report);

// Writes sweep_report.json and sweep_report.csv into `out_dir` (created).
void write_sweep_outputs(const std::filesystem::path& out_dir, const SweepReport& report,
                         const LabelSpace& labels, GainMode mode);

// ---- published-score check -------------------------------------------

enum class CheckStatus { kPass, kFail, kInfo };

struct CheckRow {
  std::string name;
  double expected = 0.0;
  std::optional<double> computed;
  double tolerance = 0.0;
  CheckStatus status = CheckStatus::kInfo;
  std::string note;
};

struct PaperCheckResult {
  std::vector<CheckRow> rows;
  bool all_passed() const;
};

// Fixture files expected in `fixtures_dir` (see data/fixtures/README.md).
// Throws kMissingFixture, kParseError.
PaperCheckResult run_paper_check(const std::filesystem::path& fixtures_dir);

// Fixed-width text table: name, expected, computed, |delta|, tolerance,
// status.
std::string format_check_table(const PaperCheckResult& result);

}  // namespace layerens

#endif  // LAYERENS_REPORTS_HPP_
