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

#include "layerens/layerens.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <filesystem>
#include <limits>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "layerens/combiner.hpp"
#include "layerens/corpus.hpp"
#include "layerens/enumeration.hpp"
#include "layerens/error.hpp"
#include "layerens/metrics.hpp"
#include "layerens/prediction_store.hpp"
#include "layerens/reports.hpp"
#include "layerens/toy_models.hpp"
#include "io.hpp"

struct le_corpus {
  layerens::Corpus corpus;
};

struct le_runset {
  layerens::RunSet runs;
};

struct le_diagnostics {
  std::vector<layerens::Diagnostic> items;
  std::vector<std::string> messages;
};

struct le_sweep {
  layerens::SweepReport report;
  layerens::LabelSpace labels;
  layerens::GainMode gain_mode;
  std::vector<std::string> joined;
  std::string best_line;
};

struct le_check {
  layerens::PaperCheckResult result;
  std::string table;
};

namespace {

thread_local std::string g_last_error;

le_status to_status(layerens::ErrorCode code) { return static_cast<le_status>(code); }

le_status set_error(le_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs `body`, translating exceptions into a status and last-error message.
template <typename F>
le_status guarded(F&& body) {
  try {
    body();
    return LE_OK;
  } catch (const layerens::Error& e) {
    return set_error(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(LE_ERR_INTERNAL, "out of memory");
  } catch (const std::filesystem::filesystem_error& e) {
    return set_error(LE_ERR_IO, e.what());
  } catch (const std::exception& e) {
    return set_error(LE_ERR_INTERNAL, e.what());
  } catch (...) {
    return set_error(LE_ERR_INTERNAL, "unknown failure");
  }
}

layerens::LoadGoldOptions gold_options(const char* label_space_path, const char* dataset_id) {
  layerens::LoadGoldOptions options;
  if (label_space_path != nullptr) {
    options.mode = layerens::LabelSpaceMode::kDeclared;
    options.label_space_path = label_space_path;
  }
  if (dataset_id != nullptr) options.dataset_id = dataset_id;
  return options;
}

#define LE_REQUIRE(cond, what)                                                  \
  do {                                                                          \
    if (!(cond)) return set_error(LE_ERR_INVALID_ARGUMENT, what " is required"); \
  } while (0)

}  // namespace

extern "C" {

const char* le_version(void) { return "0.1.0"; }

const char* le_last_error(void) { return g_last_error.c_str(); }

const char* le_status_name(le_status status) {
  if (status == LE_ERR_INTERNAL) return "Internal";
  if (status < LE_OK || status > LE_ERR_INVALID_IDENTIFIER) return "Unknown";
  // The names are string literals, hence NUL-terminated.
  return layerens::error_code_name(static_cast<layerens::ErrorCode>(status)).data();
}

le_status le_label_canonicalize(const char* const* components, size_t count, char* buf,
                                size_t buf_size, size_t* required) {
  LE_REQUIRE(components != nullptr || count == 0, "components");
  return guarded([&] {
    std::vector<std::string> parts;
    parts.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      if (components[i] == nullptr) layerens::fail(layerens::ErrorCode::kInvalidArgument, "null component");
      parts.emplace_back(components[i]);
    }
    const std::string text = layerens::canonicalize_label(parts).text();
    if (required != nullptr) *required = text.size() + 1;
    if (buf != nullptr && buf_size > 0) {
      const size_t n = std::min(text.size(), buf_size - 1);
      std::memcpy(buf, text.data(), n);
      buf[n] = '\0';
    }
  });
}

le_status le_corpus_load(const char* path, const char* label_space_path, const char* dataset_id,
                         le_corpus** out) {
  LE_REQUIRE(path != nullptr, "path");
  LE_REQUIRE(out != nullptr, "out");
  *out = nullptr;
  return guarded([&] {
    auto handle = std::make_unique<le_corpus>();
    handle->corpus = layerens::load_gold(path, gold_options(label_space_path, dataset_id));
    *out = handle.release();
  });
}

void le_corpus_free(le_corpus* corpus) { delete corpus; }

size_t le_corpus_num_examples(const le_corpus* corpus) {
  return corpus == nullptr ? 0 : corpus->corpus.gold.size();
}

size_t le_corpus_num_labels(const le_corpus* corpus) {
  return corpus == nullptr ? 0 : corpus->corpus.labels.size();
}

const char* le_corpus_label(const le_corpus* corpus, size_t index) {
  if (corpus == nullptr || index >= corpus->corpus.labels.size()) return nullptr;
  return corpus->corpus.labels.labels()[index].text().c_str();
}

const char* le_corpus_dataset_id(const le_corpus* corpus) {
  return corpus == nullptr ? nullptr : corpus->corpus.gold.dataset_id.c_str();
}

le_status le_runset_load(const char* manifest_path, const le_corpus* corpus, le_runset** out) {
  LE_REQUIRE(manifest_path != nullptr, "manifest_path");
  LE_REQUIRE(corpus != nullptr, "corpus");
  LE_REQUIRE(out != nullptr, "out");
  *out = nullptr;
  return guarded([&] {
    auto handle = std::make_unique<le_runset>();
    handle->runs = layerens::load_run_set(manifest_path, corpus->corpus.gold, corpus->corpus.labels);
    *out = handle.release();
  });
}

void le_runset_free(le_runset* runs) { delete runs; }

size_t le_runset_num_runs(const le_runset* runs) {
  return runs == nullptr ? 0 : runs->runs.runs().size();
}

size_t le_runset_num_models(const le_runset* runs) {
  return runs == nullptr ? 0 : runs->runs.by_model().size();
}

le_status le_validate(const char* manifest_path, const char* corpus_path,
                      const char* label_space_path, const char* dataset_id,
                      le_diagnostics** out) {
  LE_REQUIRE(manifest_path != nullptr, "manifest_path");
  LE_REQUIRE(corpus_path != nullptr, "corpus_path");
  LE_REQUIRE(out != nullptr, "out");
  *out = nullptr;
  return guarded([&] {
    auto handle = std::make_unique<le_diagnostics>();
    handle->items = layerens::validate_inputs(manifest_path, corpus_path,
                                              gold_options(label_space_path, dataset_id));
    for (const auto& d : handle->items) handle->messages.push_back(d.to_string());
    *out = handle.release();
  });
}

size_t le_diagnostics_count(const le_diagnostics* diags) {
  return diags == nullptr ? 0 : diags->items.size();
}

const char* le_diagnostics_message(const le_diagnostics* diags, size_t index) {
  if (diags == nullptr || index >= diags->messages.size()) return nullptr;
  return diags->messages[index].c_str();
}

le_status le_diagnostics_code(const le_diagnostics* diags, size_t index) {
  if (diags == nullptr || index >= diags->items.size()) {
    return set_error(LE_ERR_INDEX_OUT_OF_RANGE, "diagnostic index out of range");
  }
  return to_status(diags->items[index].code);
}

void le_diagnostics_free(le_diagnostics* diags) { delete diags; }

le_status le_majority_vote(const le_vote* votes, size_t count, le_vote* out) {
  LE_REQUIRE(votes != nullptr || count == 0, "votes");
  LE_REQUIRE(out != nullptr, "out");
  return guarded([&] {
    std::vector<layerens::Vote> input(count);
    for (size_t i = 0; i < count; ++i) {
      input[i] = {layerens::LabelId{votes[i].label}, votes[i].confidence};
    }
    const layerens::Vote winner = layerens::majority_vote_with_confidence(input);
    out->label = winner.label.value;
    out->confidence = winner.confidence;
  });
}

uint64_t le_count_subsets(size_t k, size_t min_size) {
  try {
    return layerens::count_subsets(k, min_size);
  } catch (const layerens::Error& e) {
    set_error(to_status(e.code()), e.what());
    return 0;
  }
}

void le_sweep_options_default(le_sweep_options* options) {
  if (options == nullptr) return;
  const layerens::SweepOptions defaults;
  options->min_size = defaults.min_size;
  options->f1_mode = LE_F1_MICRO;
  options->gain_mode = LE_GAIN_VS_MEAN;
  options->policy = LE_POLICY_MAX_OF_SUPPORTERS;
  options->fallback = 1;
  options->jobs = defaults.jobs;
  options->retain_top = defaults.retain_top;
}

le_status le_sweep_run(const le_runset* runs, const le_corpus* corpus,
                       const le_sweep_options* options, le_sweep** out) {
  LE_REQUIRE(runs != nullptr, "runs");
  LE_REQUIRE(corpus != nullptr, "corpus");
  LE_REQUIRE(out != nullptr, "out");
  *out = nullptr;
  le_sweep_options opts;
  le_sweep_options_default(&opts);
  if (options != nullptr) opts = *options;
  if (opts.f1_mode != LE_F1_MICRO && opts.f1_mode != LE_F1_MACRO) {
    return set_error(LE_ERR_INVALID_ARGUMENT, "unknown f1 mode");
  }
  if (opts.gain_mode != LE_GAIN_VS_MEAN && opts.gain_mode != LE_GAIN_VS_MIN) {
    return set_error(LE_ERR_INVALID_ARGUMENT, "unknown gain mode");
  }
  if (opts.policy < LE_POLICY_MAX_OF_SUPPORTERS || opts.policy > LE_POLICY_DISTRIBUTION_AVERAGE) {
    return set_error(LE_ERR_INVALID_ARGUMENT, "unknown combiner policy");
  }
  return guarded([&] {
    layerens::SweepOptions sweep_options;
    sweep_options.min_size = opts.min_size;
    sweep_options.f1_mode =
        opts.f1_mode == LE_F1_MACRO ? layerens::F1Mode::kMacro : layerens::F1Mode::kMicro;
    sweep_options.policy = static_cast<layerens::CombinerPolicy>(opts.policy);
    sweep_options.fallback = opts.fallback != 0;
    sweep_options.jobs = opts.jobs == 0 ? 1 : opts.jobs;
    sweep_options.retain_top = opts.retain_top;

    auto handle = std::make_unique<le_sweep>(le_sweep{
        layerens::run_sweep(runs->runs, corpus->corpus.gold, corpus->corpus.labels, sweep_options),
        corpus->corpus.labels,
        opts.gain_mode == LE_GAIN_VS_MIN ? layerens::GainMode::kVsMin : layerens::GainMode::kVsMean,
        {},
        {}});
    handle->joined.reserve(handle->report.results.size());
    for (const auto& r : handle->report.results) handle->joined.push_back(r.spec.joined());
    handle->best_line = layerens::best_line(handle->report);
    *out = handle.release();
  });
}

size_t le_sweep_num_results(const le_sweep* sweep) {
  return sweep == nullptr ? 0 : sweep->report.results.size();
}

le_status le_sweep_result(const le_sweep* sweep, size_t rank, const char** members, double* f1) {
  LE_REQUIRE(sweep != nullptr, "sweep");
  if (rank >= sweep->report.results.size()) {
    return set_error(LE_ERR_INDEX_OUT_OF_RANGE, "rank " + std::to_string(rank) + " out of range");
  }
  if (members != nullptr) *members = sweep->joined[rank].c_str();
  if (f1 != nullptr) *f1 = sweep->report.results[rank].f1;
  return LE_OK;
}

const char* le_sweep_best_line(const le_sweep* sweep) {
  return sweep == nullptr ? nullptr : sweep->best_line.c_str();
}

le_status le_sweep_write(const le_sweep* sweep, const char* out_dir) {
  LE_REQUIRE(sweep != nullptr, "sweep");
  LE_REQUIRE(out_dir != nullptr, "out_dir");
  return guarded([&] {
    layerens::write_sweep_outputs(out_dir, sweep->report, sweep->labels, sweep->gain_mode);
  });
}

void le_sweep_free(le_sweep* sweep) { delete sweep; }

le_status le_paper_check(const char* fixtures_dir, le_check** out) {
  LE_REQUIRE(fixtures_dir != nullptr, "fixtures_dir");
  LE_REQUIRE(out != nullptr, "out");
  *out = nullptr;
  return guarded([&] {
    auto handle = std::make_unique<le_check>();
    handle->result = layerens::run_paper_check(fixtures_dir);
    handle->table = layerens::format_check_table(handle->result);
    *out = handle.release();
  });
}

int le_check_all_passed(const le_check* check) {
  return check != nullptr && check->result.all_passed() ? 1 : 0;
}

const char* le_check_table(const le_check* check) {
  return check == nullptr ? nullptr : check->table.c_str();
}

size_t le_check_num_rows(const le_check* check) {
  return check == nullptr ? 0 : check->result.rows.size();
}

le_status le_check_row(const le_check* check, size_t index, const char** name, double* expected,
                       double* computed, le_check_status* status) {
  LE_REQUIRE(check != nullptr, "check");
  if (index >= check->result.rows.size()) {
    return set_error(LE_ERR_INDEX_OUT_OF_RANGE, "row index out of range");
  }
  const auto& row = check->result.rows[index];
  if (name != nullptr) *name = row.name.c_str();
  if (expected != nullptr) *expected = row.expected;
  if (computed != nullptr) {
    *computed = row.computed.value_or(std::numeric_limits<double>::quiet_NaN());
  }
  if (status != nullptr) {
    switch (row.status) {
      case layerens::CheckStatus::kPass: *status = LE_CHECK_PASS; break;
      case layerens::CheckStatus::kFail: *status = LE_CHECK_FAIL; break;
      case layerens::CheckStatus::kInfo: *status = LE_CHECK_INFO; break;
    }
  }
  return LE_OK;
}

void le_check_free(le_check* check) { delete check; }

le_status le_toy_train_grid(const char* train_corpus, const char* eval_corpus,
                            const char* label_space_path, uint64_t seed, size_t jobs,
                            const char* out_dir) {
  LE_REQUIRE(train_corpus != nullptr, "train_corpus");
  LE_REQUIRE(eval_corpus != nullptr, "eval_corpus");
  LE_REQUIRE(label_space_path != nullptr, "label_space_path");
  LE_REQUIRE(out_dir != nullptr, "out_dir");
  return guarded([&] {
    const auto options = gold_options(label_space_path, nullptr);
    const layerens::Corpus train = layerens::load_gold(train_corpus, options);
    const layerens::Corpus eval = layerens::load_gold(eval_corpus, options);
    const auto grid = layerens::toy_grid(seed);
    const auto trained =
        layerens::train_toy_grid(grid, train.gold, eval.gold, eval.labels, jobs == 0 ? 1 : jobs);
    const std::filesystem::path out(out_dir);
    std::vector<layerens::PredictionRun> runs;
    runs.reserve(trained.size());
    for (const auto& t : trained) {
      const auto& id = t.predictions.run_id;
      layerens::save_parameters(
          out / "models" / (id.model_id + "_" + std::to_string(id.init_index) + ".json"),
          t.params);
      runs.push_back(t.predictions);
    }
    layerens::write_run_directory(out, eval.gold.dataset_id, runs);
  });
}

void le_synth_options_default(le_synth_options* options) {
  if (options == nullptr) return;
  options->num_models = 12;
  options->inits_per_model = 3;
  options->accuracy = 0.8;
  options->correlation = 0.0;
  options->confidence_sharpness = 2.0;
  options->seed = 1;
}

le_status le_synth_runs(const char* corpus_path, const char* label_space_path,
                        const le_synth_options* options, const char* out_dir) {
  LE_REQUIRE(corpus_path != nullptr, "corpus_path");
  LE_REQUIRE(out_dir != nullptr, "out_dir");
  le_synth_options opts;
  le_synth_options_default(&opts);
  if (options != nullptr) opts = *options;
  if (opts.num_models < 1 || opts.inits_per_model < 1) {
    return set_error(LE_ERR_INVALID_ARGUMENT, "num_models and inits_per_model must be >= 1");
  }
  return guarded([&] {
    const layerens::Corpus corpus =
        layerens::load_gold(corpus_path, gold_options(label_space_path, nullptr));
    std::vector<layerens::PredictionRun> runs;
    for (int m = 1; m <= opts.num_models; ++m) {
      layerens::SyntheticPredictorConfig config;
      config.accuracy = opts.accuracy;
      config.correlation = opts.correlation;
      config.confidence_sharpness = opts.confidence_sharpness;
      config.seed = layerens::derive_seed(opts.seed, static_cast<std::uint64_t>(m));
      char id[32];
      std::snprintf(id, sizeof(id), "Synth%02d", m);
      config.model_id = id;
      const layerens::RunSet model_runs = layerens::generate_synthetic_runs(
          config, opts.inits_per_model, corpus.gold, corpus.labels);
      for (const auto& run : model_runs.runs()) runs.push_back(run);
    }
    layerens::write_run_directory(out_dir, corpus.gold.dataset_id, runs);
  });
}

le_status le_synth_corpus(size_t num_examples, uint64_t seed, const char* id_prefix,
                          const char* corpus_out, const char* label_space_out) {
  LE_REQUIRE(corpus_out != nullptr, "corpus_out");
  LE_REQUIRE(label_space_out != nullptr, "label_space_out");
  return guarded([&] {
    layerens::ToyCorpusOptions options;
    options.num_examples = num_examples;
    options.seed = seed;
    if (id_prefix != nullptr) options.id_prefix = id_prefix;
    options.dataset_id = std::filesystem::path(corpus_out).stem().string();
    const layerens::Corpus corpus = layerens::generate_toy_corpus(options);
    layerens::save_gold(corpus_out, corpus.gold, corpus.labels);
    layerens::internal::write_file(label_space_out, layerens::serialize_label_space(corpus.labels));
  });
}

}  // extern "C"
