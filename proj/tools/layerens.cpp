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

// layerens command-line front end. Talks to the engine only through the C
// interface in layerens/layerens.h.

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "layerens/layerens.h"

#ifndef LAYERENS_DEFAULT_FIXTURES
#define LAYERENS_DEFAULT_FIXTURES "data/fixtures"
#endif

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// Problems with what the user handed us map to 2, everything else to 1.
int exit_code_for(le_status status) {
  switch (status) {
    case LE_OK:
      return kExitOk;
    case LE_ERR_EMPTY_VOTE_LIST:
    case LE_ERR_MISSING_MEMBER_VOTE:
    case LE_ERR_NO_MATCHING_ENSEMBLE:
    case LE_ERR_LENGTH_MISMATCH:
    case LE_ERR_EMPTY_CONSTITUENTS:
    case LE_ERR_INTERNAL:
      return kExitFailure;
    default:
      return kExitUsage;
  }
}

int report_failure(const char* what, le_status status) {
  std::cerr << "layerens " << what << ": " << le_status_name(status) << ": " << le_last_error()
            << "\n";
  return exit_code_for(status);
}

const char* opt_cstr(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

struct CorpusArgs {
  std::string manifest;
  std::string corpus;
  std::string labels;
  std::string dataset_id;
};

void add_corpus_args(CLI::App* cmd, CorpusArgs& args, bool with_manifest) {
  if (with_manifest) {
    cmd->add_option("--manifest", args.manifest, "Run manifest (JSON)")->required();
  }
  cmd->add_option("--corpus", args.corpus, "Gold corpus (JSONL)")->required();
  cmd->add_option("--labels", args.labels,
                  "Declared label space (JSON list); inferred from the corpus when absent");
  cmd->add_option("--dataset-id", args.dataset_id,
                  "Dataset id; defaults to the corpus file stem");
}

int cmd_validate(const CorpusArgs& args) {
  le_diagnostics* diags = nullptr;
  const le_status status = le_validate(args.manifest.c_str(), args.corpus.c_str(),
                                       opt_cstr(args.labels), opt_cstr(args.dataset_id), &diags);
  if (status != LE_OK) return report_failure("validate", status);
  const size_t n = le_diagnostics_count(diags);
  for (size_t i = 0; i < n; ++i) std::cout << le_diagnostics_message(diags, i) << "\n";
  std::cout << n << (n == 1 ? " problem" : " problems") << " found\n";
  le_diagnostics_free(diags);
  return n == 0 ? kExitOk : kExitFailure;
}

struct SweepArgs {
  CorpusArgs inputs;
  size_t min_size = 2;
  std::string gain_mode = "mean";
  std::string f1_mode = "micro";
  std::string policy = "max";
  bool no_fallback = false;
  size_t jobs = 1;
  size_t retain_top = 25;
  std::string out;
};

int cmd_sweep(const SweepArgs& args) {
  le_corpus* corpus = nullptr;
  le_status status = le_corpus_load(args.inputs.corpus.c_str(), opt_cstr(args.inputs.labels),
                                    opt_cstr(args.inputs.dataset_id), &corpus);
  if (status != LE_OK) return report_failure("sweep", status);
  le_runset* runs = nullptr;
  status = le_runset_load(args.inputs.manifest.c_str(), corpus, &runs);
  if (status != LE_OK) {
    le_corpus_free(corpus);
    return report_failure("sweep", status);
  }

  le_sweep_options options;
  le_sweep_options_default(&options);
  options.min_size = args.min_size;
  options.f1_mode = args.f1_mode == "macro" ? LE_F1_MACRO : LE_F1_MICRO;
  options.gain_mode = args.gain_mode == "min" ? LE_GAIN_VS_MIN : LE_GAIN_VS_MEAN;
  if (args.policy == "mean") {
    options.policy = LE_POLICY_MEAN_OF_SUPPORTERS;
  } else if (args.policy == "average") {
    options.policy = LE_POLICY_DISTRIBUTION_AVERAGE;
  }
  options.fallback = args.no_fallback ? 0 : 1;
  options.jobs = args.jobs;
  options.retain_top = args.retain_top;

  le_sweep* sweep = nullptr;
  status = le_sweep_run(runs, corpus, &options, &sweep);
  int code = kExitOk;
  if (status != LE_OK) {
    code = report_failure("sweep", status);
  } else {
    if (!args.out.empty()) {
      status = le_sweep_write(sweep, args.out.c_str());
      if (status != LE_OK) code = report_failure("sweep", status);
    }
    if (code == kExitOk) {
      std::cerr << le_sweep_num_results(sweep) << " ensembles scored\n";
      std::cout << le_sweep_best_line(sweep) << "\n";
    }
  }
  le_sweep_free(sweep);
  le_runset_free(runs);
  le_corpus_free(corpus);
  return code;
}

int cmd_paper_check(const std::string& fixtures) {
  le_check* check = nullptr;
  const le_status status = le_paper_check(fixtures.c_str(), &check);
  if (status != LE_OK) return report_failure("paper-check", status);
  std::cout << le_check_table(check);
  const int code = le_check_all_passed(check) ? kExitOk : kExitFailure;
  le_check_free(check);
  return code;
}

struct TrainArgs {
  std::string train;
  std::string eval;
  std::string labels;
  std::uint64_t seed = 1;
  size_t jobs = 1;
  std::string out;
};

int cmd_train_toy(const TrainArgs& args) {
  const le_status status = le_toy_train_grid(args.train.c_str(), args.eval.c_str(),
                                             args.labels.c_str(), args.seed, args.jobs,
                                             args.out.c_str());
  if (status != LE_OK) return report_failure("train-toy", status);
  std::cout << "wrote " << args.out << "/manifest.json\n";
  return kExitOk;
}

struct SynthCorpusArgs {
  size_t num_examples = 500;
  std::uint64_t seed = 7;
  std::string id_prefix = "toy";
  std::string corpus_out;
  std::string labels_out;
};

struct SynthRunsArgs {
  std::string corpus;
  std::string labels;
  le_synth_options options{};
  std::string out;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-layer ensembling of intent classifiers"};
  app.require_subcommand(1);
  app.set_version_flag("--version", le_version());

  CorpusArgs validate_args;
  auto* validate = app.add_subcommand("validate", "Check a manifest and corpus for problems");
  add_corpus_args(validate, validate_args, true);

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Score every second-layer ensemble");
  add_corpus_args(sweep, sweep_args.inputs, true);
  sweep->add_option("--min-size", sweep_args.min_size, "Smallest ensemble size")
      ->capture_default_str()
      ->check(CLI::Range(2, 63));
  sweep->add_option("--gain-mode", sweep_args.gain_mode, "Gain baseline")
      ->capture_default_str()
      ->check(CLI::IsMember({"mean", "min"}));
  sweep->add_option("--f1", sweep_args.f1_mode, "F1 averaging")
      ->capture_default_str()
      ->check(CLI::IsMember({"micro", "macro"}));
  sweep->add_option("--policy", sweep_args.policy, "Confidence policy")
      ->capture_default_str()
      ->check(CLI::IsMember({"max", "mean", "average"}));
  sweep->add_flag("--no-fallback", sweep_args.no_fallback,
                  "Abstain instead of falling back to the most confident vote");
  sweep->add_option("--jobs", sweep_args.jobs, "Worker threads")
      ->capture_default_str()
      ->check(CLI::Range(1, 1024));
  sweep->add_option("--retain-top", sweep_args.retain_top,
                    "Top results whose predictions go into the report")
      ->capture_default_str();
  sweep->add_option("--out", sweep_args.out, "Report directory");

  std::string fixtures = LAYERENS_DEFAULT_FIXTURES;
  auto* paper = app.add_subcommand("paper-check", "Recompute published statistics from fixtures");
  paper->add_option("fixtures,--fixtures", fixtures, "Fixture directory")->capture_default_str();

  TrainArgs train_args;
  auto* train = app.add_subcommand("train-toy", "Train the toy model grid and write its runs");
  train->add_option("--corpus", train_args.train, "Training corpus (JSONL)")->required();
  train->add_option("--eval-corpus", train_args.eval, "Corpus to predict (JSONL)")->required();
  train->add_option("--labels", train_args.labels, "Label space (JSON list)")->required();
  train->add_option("--seed", train_args.seed, "Grid seed")->capture_default_str();
  train->add_option("--jobs", train_args.jobs, "Worker threads")
      ->capture_default_str()
      ->check(CLI::Range(1, 1024));
  train->add_option("--out", train_args.out, "Output directory")->required();

  auto* synth = app.add_subcommand("synth", "Generate synthetic corpora or prediction runs");
  synth->require_subcommand(1);

  SynthCorpusArgs corpus_args;
  auto* synth_corpus = synth->add_subcommand("corpus", "Write a synthetic intent corpus");
  synth_corpus->add_option("--num-examples", corpus_args.num_examples, "Utterances")
      ->capture_default_str();
  synth_corpus->add_option("--seed", corpus_args.seed, "Seed")->capture_default_str();
  synth_corpus->add_option("--id-prefix", corpus_args.id_prefix, "Example id prefix")
      ->capture_default_str();
  synth_corpus->add_option("--out", corpus_args.corpus_out, "Corpus file (JSONL)")->required();
  synth_corpus->add_option("--labels-out", corpus_args.labels_out, "Label space file (JSON)")
      ->required();

  SynthRunsArgs runs_args;
  le_synth_options_default(&runs_args.options);
  auto* synth_runs = synth->add_subcommand("runs", "Write synthetic prediction runs");
  synth_runs->add_option("--corpus", runs_args.corpus, "Gold corpus (JSONL)")->required();
  synth_runs->add_option("--labels", runs_args.labels, "Declared label space (JSON list)");
  synth_runs->add_option("--num-models", runs_args.options.num_models, "Model ids")
      ->capture_default_str();
  synth_runs->add_option("--inits", runs_args.options.inits_per_model, "Runs per model")
      ->capture_default_str();
  synth_runs->add_option("--accuracy", runs_args.options.accuracy, "Per-run accuracy")
      ->capture_default_str();
  synth_runs->add_option("--correlation", runs_args.options.correlation,
                         "Probability of copying the shared draw")
      ->capture_default_str();
  synth_runs->add_option("--sharpness", runs_args.options.confidence_sharpness,
                         "Logit scale of the predicted label")
      ->capture_default_str();
  synth_runs->add_option("--seed", runs_args.options.seed, "Seed")->capture_default_str();
  synth_runs->add_option("--out", runs_args.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*validate) return cmd_validate(validate_args);
  if (*sweep) return cmd_sweep(sweep_args);
  if (*paper) return cmd_paper_check(fixtures);
  if (*train) return cmd_train_toy(train_args);
  if (*synth_corpus) {
    const le_status status =
        le_synth_corpus(corpus_args.num_examples, corpus_args.seed, corpus_args.id_prefix.c_str(),
                        corpus_args.corpus_out.c_str(), corpus_args.labels_out.c_str());
    return status == LE_OK ? kExitOk : report_failure("synth corpus", status);
  }
  if (*synth_runs) {
    const le_status status = le_synth_runs(runs_args.corpus.c_str(), opt_cstr(runs_args.labels),
                                           &runs_args.options, runs_args.out.c_str());
    return status == LE_OK ? kExitOk : report_failure("synth runs", status);
  }
  return kExitUsage;
}
