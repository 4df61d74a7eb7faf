/* Copyright 2026 The kbio Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* kbio: keystroke-dynamics biometrics toolkit.
 *
 * C API over the embedding network and its evaluation protocols. All state
 * lives behind opaque handles; every fallible call returns kbio_status and
 * leaves a human-readable message in kbio_last_error() (thread local).
 * Handles are freed with their matching *_free function; configs are plain
 * structs initialized to library defaults with their *_init function.
 */

#ifndef KBIO_KBIO_H_
#define KBIO_KBIO_H_

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum kbio_status {
  KBIO_OK = 0,
  KBIO_ERR_CONFIG = 1,  /* bad arguments or configuration */
  KBIO_ERR_DATA = 2,    /* malformed/insufficient data or file I/O failure */
  KBIO_ERR_NUMERIC = 3, /* non-finite values detected (e.g. diverged training) */
  KBIO_ERR_INTERNAL = 4
} kbio_status;

const char* kbio_version(void);

/* Message for the most recent failure on this thread; never NULL. */
const char* kbio_last_error(void);

/* Worker threads for batched math; n <= 1 forces serial execution, 0 picks
 * the library default. Results are identical for any setting. */
void kbio_set_threads(int n);

/* 64-bit FNV-1a digest of a file, for run manifests. */
kbio_status kbio_file_digest(const char* path, uint64_t* out_digest);

/* ---------------------------------------------------------------- dataset */

typedef struct kbio_dataset kbio_dataset;

typedef struct kbio_synth_config {
  int num_subjects;
  int sessions_per_subject;
  int mean_sentence_len;
  double hold_mean;
  double hold_between_sd;
  double hold_session_sd;
  double hold_within_sd;
  double gap_mean;
  double gap_between_sd;
  double gap_session_sd;
  double gap_within_sd;
  double key_offset_sd;
  double hold_style_sd;
  double gap_style_sd;
  double case_flip_prob;
  uint64_t seed;
} kbio_synth_config;

void kbio_synth_config_init(kbio_synth_config* config);

kbio_status kbio_dataset_generate(const kbio_synth_config* config, kbio_dataset** out);
kbio_status kbio_dataset_load(const char* path, kbio_dataset** out);
kbio_status kbio_dataset_save(const kbio_dataset* dataset, const char* path);
kbio_status kbio_dataset_split(const kbio_dataset* dataset, double train_fraction,
                               uint64_t seed, kbio_dataset** out_train,
                               kbio_dataset** out_test);
int kbio_dataset_num_sequences(const kbio_dataset* dataset);
int kbio_dataset_num_subjects(const kbio_dataset* dataset);
int64_t kbio_dataset_num_events(const kbio_dataset* dataset);
void kbio_dataset_free(kbio_dataset* dataset);

/* ------------------------------------------------------------------ model */

typedef struct kbio_model kbio_model;

typedef struct kbio_model_config {
  int input_dim;       /* 5 */
  int units;           /* 128 */
  int num_layers;      /* 2 */
  int max_seq_len;     /* M */
  double dropout_rate;
  double recurrent_dropout_rate;
  double bn_momentum;
  double bn_epsilon;
} kbio_model_config;

void kbio_model_config_init(kbio_model_config* config);

/* Trainable parameter count for a configuration; num_classes > 0 adds the
 * softmax classifier head. */
int64_t kbio_count_params(const kbio_model_config* config, int num_classes);

typedef enum kbio_loss_kind {
  KBIO_LOSS_SOFTMAX = 0,
  KBIO_LOSS_CONTRASTIVE = 1,
  KBIO_LOSS_TRIPLET = 2
} kbio_loss_kind;

typedef struct kbio_train_config {
  kbio_loss_kind loss_kind;
  double learning_rate;
  double beta1;
  double beta2;
  double epsilon;
  double margin; /* alpha */
  int epochs;
  int batches_per_epoch;
  int batch_size;
  uint64_t seed;
} kbio_train_config;

void kbio_train_config_init(kbio_train_config* config);

/* Trains a fresh model. `history_csv_path` (nullable) receives one line per
 * epoch: epoch,mean_loss,val_eer. The training set must already exclude all
 * evaluation subjects. */
kbio_status kbio_train(const kbio_dataset* train_set, const kbio_model_config* model_config,
                       const kbio_train_config* train_config, const char* history_csv_path,
                       kbio_model** out);

/* Continues training an existing model in place; the optimizer step counter
 * is preserved. */
kbio_status kbio_train_resume(kbio_model* model, const kbio_dataset* train_set,
                              const kbio_train_config* train_config,
                              const char* history_csv_path);

kbio_status kbio_model_save(const kbio_model* model, const char* path);
kbio_status kbio_model_load(const char* path, kbio_model** out);
int kbio_model_units(const kbio_model* model);
int kbio_model_seq_len(const kbio_model* model);
int64_t kbio_model_param_count(const kbio_model* model);
int64_t kbio_model_adam_steps(const kbio_model* model); /* -1 without state */
uint64_t kbio_model_training_seed(const kbio_model* model);
void kbio_model_free(kbio_model* model);

/* ----------------------------------------------------- authentication eval */

typedef struct kbio_auth_report kbio_auth_report;

/* Verification protocol over k test subjects: G enrollment sequences per
 * subject, sequences cut to M keystrokes, 5 genuine and k-1 impostor scores
 * per subject, per-subject EER averaged into mean_eer. */
kbio_status kbio_eval_auth(const kbio_model* model, const kbio_dataset* test_set,
                           int enrollment_size, int sequence_len, int num_subjects,
                           uint64_t seed, kbio_auth_report** out);
double kbio_auth_report_mean_eer(const kbio_auth_report* report);
int kbio_auth_report_num_subjects(const kbio_auth_report* report);
kbio_status kbio_auth_report_write_eer_csv(const kbio_auth_report* report, const char* path);
kbio_status kbio_auth_report_write_roc_csv(const kbio_auth_report* report, const char* path);
kbio_status kbio_auth_report_write_roc_svg(const kbio_auth_report* report, const char* path);
kbio_status kbio_auth_report_write_summary(const kbio_auth_report* report, const char* path);
void kbio_auth_report_free(kbio_auth_report* report);

/* ----------------------------------------------------- identification eval */

typedef struct kbio_ident_report kbio_ident_report;

/* Rank-n identification against a background of `background_size` enrolled
 * subjects (10 gallery + 5 query sequences each). `prescreen_attribute` may
 * be NULL or empty for no pre-screening. */
kbio_status kbio_eval_ident(const kbio_model* model, const kbio_dataset* test_set,
                            int sequence_len, int background_size, const int* ranks,
                            int num_ranks, const char* prescreen_attribute, uint64_t seed,
                            kbio_ident_report** out);
int kbio_ident_report_num_ranks(const kbio_ident_report* report);
kbio_status kbio_ident_report_rank(const kbio_ident_report* report, int index, int* out_rank,
                                   double* out_accuracy);
kbio_status kbio_ident_report_write_csv(const kbio_ident_report* report, const char* path);
kbio_status kbio_ident_report_write_summary(const kbio_ident_report* report, const char* path);
void kbio_ident_report_free(kbio_ident_report* report);

/* --------------------------------------------------- input-text dependency */

typedef struct kbio_text_report kbio_text_report;

/* One-shot (G = 1) comparisons: edit distance between the two keycode
 * strings against the embedding distance, Pearson and OLS over the pool. */
kbio_status kbio_analyze_text(const kbio_model* model, const kbio_dataset* test_set,
                              int sequence_len, int num_subjects, uint64_t seed,
                              kbio_text_report** out);
double kbio_text_report_pearson(const kbio_text_report* report);
double kbio_text_report_slope(const kbio_text_report* report);
double kbio_text_report_intercept(const kbio_text_report* report);
int kbio_text_report_sample_count(const kbio_text_report* report);
kbio_status kbio_text_report_write_csv(const kbio_text_report* report, const char* path);
kbio_status kbio_text_report_write_scatter_svg(const kbio_text_report* report,
                                               const char* path);
kbio_status kbio_text_report_write_summary(const kbio_text_report* report, const char* path);
void kbio_text_report_free(kbio_text_report* report);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* KBIO_KBIO_H_ */
