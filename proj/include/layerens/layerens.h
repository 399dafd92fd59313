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

/* C interface to the layerens engine.
 *
 * Objects are opaque handles created by le_*_load / le_*_run functions and
 * released with the matching le_*_free. Every fallible call returns an
 * le_status; on failure le_last_error() describes the problem (the message
 * is per thread and valid until the next failing call on that thread).
 * Strings returned by accessors are owned by the handle they came from. */

#ifndef LAYERENS_LAYERENS_H_
#define LAYERENS_LAYERENS_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define LE_API __declspec(dllexport)
#else
#define LE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum le_status {
  LE_OK = 0,
  LE_ERR_INVALID_ARGUMENT = 1,
  LE_ERR_IO = 2,
  LE_ERR_PARSE = 3,
  LE_ERR_EMPTY_COMPONENT = 4,
  LE_ERR_RESERVED_SEPARATOR = 5,
  LE_ERR_DUPLICATE_COMPONENT = 6,
  LE_ERR_UNKNOWN_LABEL = 7,
  LE_ERR_DUPLICATE_LABEL = 8,
  LE_ERR_DUPLICATE_EXAMPLE_ID = 9,
  LE_ERR_SHAPE_MISMATCH = 10,
  LE_ERR_ROW_SUM_VIOLATION = 11,
  LE_ERR_NEGATIVE_PROBABILITY = 12,
  LE_ERR_PROBABILITY_OUT_OF_RANGE = 13,
  LE_ERR_DATASET_MISMATCH = 14,
  LE_ERR_DUPLICATE_RUN_ID = 15,
  LE_ERR_INDEX_OUT_OF_RANGE = 16,
  LE_ERR_EMPTY_VOTE_LIST = 17,
  LE_ERR_MISSING_RUN = 18,
  LE_ERR_MISSING_MEMBER_VOTE = 19,
  LE_ERR_TOO_FEW_MODELS = 20,
  LE_ERR_NO_MATCHING_ENSEMBLE = 21,
  LE_ERR_LENGTH_MISMATCH = 22,
  LE_ERR_EMPTY_CONSTITUENTS = 23,
  LE_ERR_EMPTY_TRAIN_SET = 24,
  LE_ERR_DEGENERATE_LABEL_SPACE = 25,
  LE_ERR_MISSING_FIXTURE = 26,
  LE_ERR_INVALID_IDENTIFIER = 27,
  LE_ERR_INTERNAL = 100
} le_status;

typedef struct le_corpus le_corpus;
typedef struct le_runset le_runset;
typedef struct le_diagnostics le_diagnostics;
typedef struct le_sweep le_sweep;
typedef struct le_check le_check;

LE_API const char* le_version(void);
LE_API const char* le_last_error(void);
LE_API const char* le_status_name(le_status status);

/* ---- labels and corpora ---------------------------------------------- */

/* Writes the canonical "+"-joined label into buf (NUL-terminated, truncated
 * to buf_size). *required, if non-NULL, receives the full length + 1. */
LE_API le_status le_label_canonicalize(const char* const* components, size_t count,
                                       char* buf, size_t buf_size, size_t* required);

/* label_space_path: NULL for inferred mode, else a JSON list (declared mode).
 * dataset_id: NULL to use the corpus file stem. */
LE_API le_status le_corpus_load(const char* path, const char* label_space_path,
                                const char* dataset_id, le_corpus** out);
LE_API void le_corpus_free(le_corpus* corpus);
LE_API size_t le_corpus_num_examples(const le_corpus* corpus);
LE_API size_t le_corpus_num_labels(const le_corpus* corpus);
LE_API const char* le_corpus_label(const le_corpus* corpus, size_t index);
LE_API const char* le_corpus_dataset_id(const le_corpus* corpus);

/* ---- prediction runs --------------------------------------------------- */

LE_API le_status le_runset_load(const char* manifest_path, const le_corpus* corpus,
                                le_runset** out);
LE_API void le_runset_free(le_runset* runs);
LE_API size_t le_runset_num_runs(const le_runset* runs);
LE_API size_t le_runset_num_models(const le_runset* runs);

/* Collects every problem in a manifest + corpus pair. Returns LE_OK when the
 * check itself ran; inspect le_diagnostics_count for the verdict. */
LE_API le_status le_validate(const char* manifest_path, const char* corpus_path,
                             const char* label_space_path, const char* dataset_id,
                             le_diagnostics** out);
LE_API size_t le_diagnostics_count(const le_diagnostics* diags);
LE_API const char* le_diagnostics_message(const le_diagnostics* diags, size_t index);
LE_API le_status le_diagnostics_code(const le_diagnostics* diags, size_t index);
LE_API void le_diagnostics_free(le_diagnostics* diags);

/* ---- combination --------------------------------------------------------- */

typedef struct le_vote {
  uint32_t label;
  double confidence;
} le_vote;

LE_API le_status le_majority_vote(const le_vote* votes, size_t count, le_vote* out);
/* Subsets of a k-set with at least min_size members; 0 on invalid input. */
LE_API uint64_t le_count_subsets(size_t k, size_t min_size);

/* ---- sweeps --------------------------------------------------------------- */

typedef enum le_f1_mode { LE_F1_MICRO = 0, LE_F1_MACRO = 1 } le_f1_mode;
typedef enum le_gain_mode { LE_GAIN_VS_MEAN = 0, LE_GAIN_VS_MIN = 1 } le_gain_mode;
typedef enum le_policy {
  LE_POLICY_MAX_OF_SUPPORTERS = 0,
  LE_POLICY_MEAN_OF_SUPPORTERS = 1,
  LE_POLICY_DISTRIBUTION_AVERAGE = 2
} le_policy;

typedef struct le_sweep_options {
  size_t min_size;
  le_f1_mode f1_mode;
  le_gain_mode gain_mode;
  le_policy policy;
  int fallback; /* nonzero: confidence fallback enabled */
  size_t jobs;
  size_t retain_top;
} le_sweep_options;

LE_API void le_sweep_options_default(le_sweep_options* options);
LE_API le_status le_sweep_run(const le_runset* runs, const le_corpus* corpus,
                              const le_sweep_options* options, le_sweep** out);
LE_API size_t le_sweep_num_results(const le_sweep* sweep);
/* rank 0 is the best ensemble. *members is "/"-joined and owned by sweep. */
LE_API le_status le_sweep_result(const le_sweep* sweep, size_t rank, const char** members,
                                 double* f1);
/* "BEST <members> F1=<xx.xx>" */
LE_API const char* le_sweep_best_line(const le_sweep* sweep);
/* Writes sweep_report.json and sweep_report.csv. */
LE_API le_status le_sweep_write(const le_sweep* sweep, const char* out_dir);
LE_API void le_sweep_free(le_sweep* sweep);

/* ---- published-score check ------------------------------------------------ */

typedef enum le_check_status {
  LE_CHECK_PASS = 0,
  LE_CHECK_FAIL = 1,
  LE_CHECK_INFO = 2
} le_check_status;

LE_API le_status le_paper_check(const char* fixtures_dir, le_check** out);
LE_API int le_check_all_passed(const le_check* check);
LE_API const char* le_check_table(const le_check* check);
LE_API size_t le_check_num_rows(const le_check* check);
/* computed is NaN for rows with nothing to recompute. */
LE_API le_status le_check_row(const le_check* check, size_t index, const char** name,
                              double* expected, double* computed, le_check_status* status);
LE_API void le_check_free(le_check* check);

/* ---- toy and synthetic prediction sources --------------------------------- */

/* Trains the 12-model x 3-initialization toy grid on train_corpus and writes
 * models/, runs/ and manifest.json for eval_corpus into out_dir. */
LE_API le_status le_toy_train_grid(const char* train_corpus, const char* eval_corpus,
                                   const char* label_space_path, uint64_t seed, size_t jobs,
                                   const char* out_dir);

typedef struct le_synth_options {
  int num_models;
  int inits_per_model;
  double accuracy;
  double correlation;
  double confidence_sharpness;
  uint64_t seed;
} le_synth_options;

LE_API void le_synth_options_default(le_synth_options* options);
/* Writes runs/ and manifest.json for the corpus into out_dir. */
LE_API le_status le_synth_runs(const char* corpus_path, const char* label_space_path,
                               const le_synth_options* options, const char* out_dir);
/* Writes a synthetic intent corpus (JSONL) and its label space (JSON list). */
LE_API le_status le_synth_corpus(size_t num_examples, uint64_t seed, const char* id_prefix,
                                 const char* corpus_out, const char* label_space_out);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // LAYERENS_LAYERENS_H_
