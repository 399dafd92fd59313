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

#include "layerens/reports.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "io.hpp"
#include "json.hpp"
#include "layerens/prediction_store.hpp"

namespace layerens {
namespace {

using ordered_json = nlohmann::ordered_json;

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double aggregate(std::span<const double> values, GainMode mode) {
  if (mode == GainMode::kVsMin) return *std::min_element(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

std::string Diagnostic::to_string() const {
  std::string out = file;
  if (row > 0) out += ":" + std::to_string(row);
  if (col > 0) out += ":" + std::to_string(col);
  if (!out.empty()) out += ": ";
  out += error_code_name(code);
  out += ": ";
  out += message;
  return out;
}

std::vector<Diagnostic> validate_inputs(const std::filesystem::path& manifest_path,
                                        const std::filesystem::path& corpus_path,
                                        const LoadGoldOptions& gold_options) {
  std::vector<Diagnostic> diags;
  Corpus corpus;
  try {
    corpus = load_gold(corpus_path, gold_options);
  } catch (const Error& e) {
    diags.push_back({e.code(), corpus_path.string(), 0, 0, e.what()});
    return diags;
  }
  Manifest manifest;
  try {
    manifest = load_manifest(manifest_path);
  } catch (const Error& e) {
    diags.push_back({e.code(), manifest_path.string(), 0, 0, e.what()});
    return diags;
  }
  if (manifest.dataset_id != corpus.gold.dataset_id) {
    diags.push_back({ErrorCode::kDatasetMismatch, manifest_path.string(), 0, 0,
                     "manifest dataset '" + manifest.dataset_id +
                         "' does not match corpus dataset '" + corpus.gold.dataset_id + "'"});
  }
  if (manifest.runs.empty()) {
    diags.push_back({ErrorCode::kTooFewModels, manifest_path.string(), 0, 0,
                     "manifest lists no runs"});
  }
  std::set<RunId> seen;
  for (const auto& entry : manifest.runs) {
    if (!seen.insert(entry.run_id).second) {
      diags.push_back({ErrorCode::kDuplicateRunId, manifest_path.string(), 0, 0,
                       "duplicate run " + to_string(entry.run_id)});
    }
    std::string text;
    try {
      text = internal::read_file(entry.path);
    } catch (const Error& e) {
      diags.push_back({e.code(), entry.path.string(), 0, 0, e.what()});
      continue;
    }
    for (auto& issue : scan_matrix(text, corpus.gold.size(), corpus.labels.size())) {
      diags.push_back(
          {issue.code, entry.path.string(), issue.row, issue.col, std::move(issue.message)});
    }
  }
  return diags;
}

ReportGains compute_gains(const SweepReport& report, GainMode mode) {
  ReportGains gains;
  gains.mode = mode;

  std::map<std::string, LayerScores> table;
  std::map<std::string, double> first_layer_f1;
  bool have_best = false;
  for (const auto& fl : report.first_layer) {
    table[fl.model_id] = LayerScores{fl.run_f1s, fl.ensemble_f1};
    first_layer_f1[fl.model_id] = fl.ensemble_f1;
    for (std::size_t r = 0; r < fl.run_f1s.size(); ++r) {
      if (!have_best || fl.run_f1s[r] > gains.best_individual_f1) {
        gains.best_individual_f1 = fl.run_f1s[r];
        gains.best_individual = fl.members[r];
        have_best = true;
      }
    }
  }
  gains.first_layer = dataset_layer_gain(table, mode);

  double total = 0.0;
  std::vector<double> member_scores;
  for (const auto& result : report.results) {
    member_scores.clear();
    for (const auto& m : result.spec.members()) member_scores.push_back(first_layer_f1.at(m));
    total += result.f1 - aggregate(member_scores, mode);
  }
  gains.second_layer = total / static_cast<double>(report.results.size());
  gains.total = total_gain(gains.best_individual_f1, report.best.f1);

  const bool any_char = std::any_of(report.model_ids.begin(), report.model_ids.end(),
                                    [](const std::string& m) { return is_character_model(m); });
  if (any_char) {
    try {
      const auto& without = best_subject_to(report, [](const SecondLayerEnsemble& e) {
        return !contains_character_model(e);
      });
      gains.best_without_char_f1 = without.f1;
      gains.character = report.best.f1 - without.f1;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNoMatchingEnsemble) throw;
    }
  }
  return gains;
}

std::string serialize_report_json(const SweepReport& report, const LabelSpace& labels,
                                  GainMode mode) {
  const ReportGains gains = compute_gains(report, mode);
  const auto members_json = [](const SecondLayerEnsemble& spec) {
    return ordered_json(spec.members());
  };

  ordered_json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["dataset_id"] = report.dataset_id;
  doc["combiner_policy"] = std::string(to_string(report.options.policy));
  doc["confidence_fallback"] = report.options.fallback;
  doc["f1_mode"] = std::string(to_string(report.options.f1_mode));
  doc["gain_mode"] = std::string(to_string(mode));
  doc["min_size"] = report.options.min_size;
  doc["models"] = report.model_ids;

  ordered_json first = ordered_json::array();
  for (const auto& fl : report.first_layer) {
    ordered_json runs = ordered_json::array();
    for (std::size_t r = 0; r < fl.members.size(); ++r) {
      runs.push_back({{"init_index", fl.members[r].init_index}, {"f1", fl.run_f1s[r]}});
    }
    first.push_back({{"model_id", fl.model_id},
                     {"runs", std::move(runs)},
                     {"ensemble_f1", fl.ensemble_f1}});
  }
  doc["first_layer"] = std::move(first);

  doc["num_results"] = report.results.size();
  doc["best"] = {{"members", members_json(report.best.spec)},
                 {"size", report.best.spec.size()},
                 {"f1", report.best.f1}};

  ordered_json g;
  g["first_layer"] = gains.first_layer;
  g["second_layer"] = gains.second_layer;
  g["second_layer_status"] = "formula-faithful, unverified";
  g["best_individual"] = {{"model_id", gains.best_individual.model_id},
                          {"init_index", gains.best_individual.init_index},
                          {"f1", gains.best_individual_f1}};
  g["total"] = gains.total;
  g["best_without_char_f1"] =
      gains.best_without_char_f1 ? ordered_json(*gains.best_without_char_f1) : ordered_json();
  g["character"] = gains.character ? ordered_json(*gains.character) : ordered_json();
  doc["gains"] = std::move(g);

  ordered_json results = ordered_json::array();
  for (std::size_t index : canonical_order(report)) {
    const EnsembleResult& r = report.results[index];
    results.push_back({{"members", members_json(r.spec)},
                       {"rank", index + 1},
                       {"size", r.spec.size()},
                       {"f1", r.f1},
                       {"num_correct", r.num_correct}});
  }
  doc["results"] = std::move(results);

  ordered_json retained = ordered_json::array();
  for (const auto& r : report.results) {
    if (!r.predictions) continue;
    ordered_json preds = ordered_json::array();
    for (LabelId id : *r.predictions) {
      preds.push_back(id == kNoLabel ? ordered_json() : ordered_json(labels.label(id).text()));
    }
    retained.push_back({{"members", members_json(r.spec)},
                        {"f1", r.f1},
                        {"predictions", std::move(preds)}});
  }
  doc["retained"] = std::move(retained);
  return doc.dump(2) + "\n";
}

std::string serialize_report_csv(const SweepReport& report) {
  std::string out = "members,size,f1_percent\n";
  for (std::size_t index : canonical_order(report)) {
    const EnsembleResult& r = report.results[index];
    out += r.spec.joined();
    out += ',';
    out += std::to_string(r.spec.size());
    out += ',';
    out += format_percent(r.f1);
    out += '\n';
  }
  return out;
}

std::vector<ReportCsvRow> parse_report_csv(std::string_view text) {
  std::vector<ReportCsvRow> rows;
  const auto lines = split(text, '\n');
  if (lines.empty() || lines.front() != "members,size,f1_percent") {
    fail(ErrorCode::kParseError, "sweep CSV must start with 'members,size,f1_percent'");
  }
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split(lines[i], ',');
    if (fields.size() != 3) {
      fail(ErrorCode::kParseError, "sweep CSV line " + std::to_string(i + 1) +
                                       " does not have 3 fields");
    }
    ReportCsvRow row;
    row.members = split(fields[0], '/');
    try {
      row.size = std::stoul(fields[1]);
    } catch (const std::exception&) {
      fail(ErrorCode::kParseError, "bad size on sweep CSV line " + std::to_string(i + 1));
    }
    row.f1_percent = fields[2];
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string best_line(const SweepReport& report) {
  return "BEST " + report.best.spec.joined() + " F1=" + format_percent(report.best.f1);
}

void write_sweep_outputs(const std::filesystem::path& out_dir, const SweepReport& report,
                         const LabelSpace& labels, GainMode mode) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) fail(ErrorCode::kIoError, "cannot create " + out_dir.string() + ": " + ec.message());
  internal::write_file(out_dir / "sweep_report.json", serialize_report_json(report, labels, mode));
  internal::write_file(out_dir / "sweep_report.csv", serialize_report_csv(report));
}

}  // namespace layerens
