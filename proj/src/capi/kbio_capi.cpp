// Copyright 2026 The kbio Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "kbio/kbio.h"

#include <cstdint>
#include <fstream>
#include <string>

#include "core/analysis/text_dependency.hpp"
#include "core/common.hpp"
#include "core/data/log_io.hpp"
#include "core/data/split.hpp"
#include "core/data/synth.hpp"
#include "core/eval/auth.hpp"
#include "core/eval/ident.hpp"
#include "core/eval/report_io.hpp"
#include "core/learn/trainer.hpp"
#include "core/net/checkpoint.hpp"
#include "core/net/forward.hpp"

struct kbio_dataset {
  kbio::Dataset data;
};

struct kbio_model {
  kbio::Checkpoint state;
};

struct kbio_auth_report {
  kbio::AuthReport report;
};

struct kbio_ident_report {
  kbio::IdentReport report;
};

struct kbio_text_report {
  kbio::CorrelationReport report;
};

namespace {

thread_local std::string g_last_error = "";

kbio_status fail(kbio_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename Fn>
kbio_status guarded(Fn&& fn) {
  try {
    fn();
    return KBIO_OK;
  } catch (const kbio::ConfigError& e) {
    return fail(KBIO_ERR_CONFIG, e.what());
  } catch (const kbio::DataError& e) {
    return fail(KBIO_ERR_DATA, e.what());
  } catch (const kbio::NumericError& e) {
    return fail(KBIO_ERR_NUMERIC, e.what());
  } catch (const std::exception& e) {
    return fail(KBIO_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(KBIO_ERR_INTERNAL, "unknown error");
  }
}

kbio_status require(bool ok, const char* message) {
  return ok ? KBIO_OK : fail(KBIO_ERR_CONFIG, message);
}

kbio::ModelConfig to_core(const kbio_model_config& c) {
  kbio::ModelConfig out;
  out.input_dim = c.input_dim;
  out.units = c.units;
  out.num_layers = c.num_layers;
  out.max_seq_len = c.max_seq_len;
  out.dropout_rate = c.dropout_rate;
  out.recurrent_dropout_rate = c.recurrent_dropout_rate;
  out.bn_momentum = c.bn_momentum;
  out.bn_epsilon = c.bn_epsilon;
  return out;
}

kbio::TrainConfig to_core(const kbio_train_config& c) {
  kbio::TrainConfig out;
  switch (c.loss_kind) {
    case KBIO_LOSS_SOFTMAX: out.loss_kind = kbio::LossKind::kSoftmax; break;
    case KBIO_LOSS_CONTRASTIVE: out.loss_kind = kbio::LossKind::kContrastive; break;
    case KBIO_LOSS_TRIPLET: out.loss_kind = kbio::LossKind::kTriplet; break;
    default: throw kbio::ConfigError("unknown loss kind");
  }
  out.learning_rate = c.learning_rate;
  out.beta1 = c.beta1;
  out.beta2 = c.beta2;
  out.epsilon = c.epsilon;
  out.margin = c.margin;
  out.epochs = c.epochs;
  out.batches_per_epoch = c.batches_per_epoch;
  out.batch_size = c.batch_size;
  out.seed = c.seed;
  return out;
}

kbio::SynthConfig to_core(const kbio_synth_config& c) {
  kbio::SynthConfig out;
  out.num_subjects = c.num_subjects;
  out.sessions_per_subject = c.sessions_per_subject;
  out.mean_sentence_len = c.mean_sentence_len;
  out.hold_mean = c.hold_mean;
  out.hold_between_sd = c.hold_between_sd;
  out.hold_session_sd = c.hold_session_sd;
  out.hold_within_sd = c.hold_within_sd;
  out.gap_mean = c.gap_mean;
  out.gap_between_sd = c.gap_between_sd;
  out.gap_session_sd = c.gap_session_sd;
  out.gap_within_sd = c.gap_within_sd;
  out.key_offset_sd = c.key_offset_sd;
  out.hold_style_sd = c.hold_style_sd;
  out.gap_style_sd = c.gap_style_sd;
  out.case_flip_prob = c.case_flip_prob;
  out.seed = c.seed;
  return out;
}

}  // namespace

extern "C" {

const char* kbio_version(void) { return kbio::kVersion; }

const char* kbio_last_error(void) { return g_last_error.c_str(); }

void kbio_set_threads(int n) { kbio::set_num_threads(n); }

kbio_status kbio_file_digest(const char* path, uint64_t* out_digest) {
  if (kbio_status s = require(path != nullptr && out_digest != nullptr, "null argument")) return s;
  return guarded([&] {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw kbio::DataError(std::string("cannot open '") + path + "'");
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buffer[65536];
    while (in.read(buffer, sizeof buffer) || in.gcount() > 0) {
      const std::streamsize got = in.gcount();
      for (std::streamsize i = 0; i < got; ++i) {
        hash ^= static_cast<unsigned char>(buffer[i]);
        hash *= 0x100000001b3ULL;
      }
    }
    *out_digest = hash;
  });
}

/* ---------------------------------------------------------------- dataset */

void kbio_synth_config_init(kbio_synth_config* config) {
  if (config == nullptr) return;
  const kbio::SynthConfig d;
  config->num_subjects = d.num_subjects;
  config->sessions_per_subject = d.sessions_per_subject;
  config->mean_sentence_len = d.mean_sentence_len;
  config->hold_mean = d.hold_mean;
  config->hold_between_sd = d.hold_between_sd;
  config->hold_session_sd = d.hold_session_sd;
  config->hold_within_sd = d.hold_within_sd;
  config->gap_mean = d.gap_mean;
  config->gap_between_sd = d.gap_between_sd;
  config->gap_session_sd = d.gap_session_sd;
  config->gap_within_sd = d.gap_within_sd;
  config->key_offset_sd = d.key_offset_sd;
  config->hold_style_sd = d.hold_style_sd;
  config->gap_style_sd = d.gap_style_sd;
  config->case_flip_prob = d.case_flip_prob;
  config->seed = d.seed;
}

kbio_status kbio_dataset_generate(const kbio_synth_config* config, kbio_dataset** out) {
  if (kbio_status s = require(config != nullptr && out != nullptr, "null argument")) return s;
  return guarded([&] { *out = new kbio_dataset{kbio::generate_synthetic(to_core(*config))}; });
}

kbio_status kbio_dataset_load(const char* path, kbio_dataset** out) {
  if (kbio_status s = require(path != nullptr && out != nullptr, "null argument")) return s;
  return guarded([&] { *out = new kbio_dataset{kbio::load_dataset(path).dataset}; });
}

kbio_status kbio_dataset_save(const kbio_dataset* dataset, const char* path) {
  if (kbio_status s = require(dataset != nullptr && path != nullptr, "null argument")) return s;
  return guarded([&] { kbio::save_dataset(dataset->data, path); });
}

kbio_status kbio_dataset_split(const kbio_dataset* dataset, double train_fraction,
                               uint64_t seed, kbio_dataset** out_train,
                               kbio_dataset** out_test) {
  if (kbio_status s = require(dataset != nullptr && out_train != nullptr && out_test != nullptr,
                              "null argument")) {
    return s;
  }
  return guarded([&] {
    auto [train, test] = kbio::split_subjects(dataset->data, train_fraction, seed);
    *out_train = new kbio_dataset{std::move(train)};
    *out_test = new kbio_dataset{std::move(test)};
  });
}

int kbio_dataset_num_sequences(const kbio_dataset* dataset) {
  return dataset == nullptr ? 0 : static_cast<int>(dataset->data.size());
}

int kbio_dataset_num_subjects(const kbio_dataset* dataset) {
  return dataset == nullptr ? 0 : static_cast<int>(kbio::subject_ids(dataset->data).size());
}

int64_t kbio_dataset_num_events(const kbio_dataset* dataset) {
  if (dataset == nullptr) return 0;
  std::int64_t total = 0;
  for (const auto& seq : dataset->data) total += static_cast<std::int64_t>(seq.events.size());
  return total;
}

void kbio_dataset_free(kbio_dataset* dataset) { delete dataset; }

/* ------------------------------------------------------------------ model */

void kbio_model_config_init(kbio_model_config* config) {
  if (config == nullptr) return;
  const kbio::ModelConfig d;
  config->input_dim = d.input_dim;
  config->units = d.units;
  config->num_layers = d.num_layers;
  config->max_seq_len = d.max_seq_len;
  config->dropout_rate = d.dropout_rate;
  config->recurrent_dropout_rate = d.recurrent_dropout_rate;
  config->bn_momentum = d.bn_momentum;
  config->bn_epsilon = d.bn_epsilon;
}

int64_t kbio_count_params(const kbio_model_config* config, int num_classes) {
  if (config == nullptr) return -1;
  try {
    return kbio::count_params(to_core(*config), num_classes);
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return -1;
  }
}

void kbio_train_config_init(kbio_train_config* config) {
  if (config == nullptr) return;
  const kbio::TrainConfig d;
  config->loss_kind = KBIO_LOSS_TRIPLET;
  config->learning_rate = d.learning_rate;
  config->beta1 = d.beta1;
  config->beta2 = d.beta2;
  config->epsilon = d.epsilon;
  config->margin = d.margin;
  config->epochs = d.epochs;
  config->batches_per_epoch = d.batches_per_epoch;
  config->batch_size = d.batch_size;
  config->seed = d.seed;
}

kbio_status kbio_train(const kbio_dataset* train_set, const kbio_model_config* model_config,
                       const kbio_train_config* train_config, const char* history_csv_path,
                       kbio_model** out) {
  if (kbio_status s = require(train_set != nullptr && model_config != nullptr &&
                                  train_config != nullptr && out != nullptr,
                              "null argument")) {
    return s;
  }
  return guarded([&] {
    auto result = kbio::train(train_set->data, to_core(*model_config), to_core(*train_config));
    if (history_csv_path != nullptr && history_csv_path[0] != '\0') {
      kbio::write_history_csv(result.history, history_csv_path);
    }
    *out = new kbio_model{
        {std::move(result.params), std::move(result.adam), train_config->seed}};
  });
}

kbio_status kbio_train_resume(kbio_model* model, const kbio_dataset* train_set,
                              const kbio_train_config* train_config,
                              const char* history_csv_path) {
  if (kbio_status s = require(model != nullptr && train_set != nullptr && train_config != nullptr,
                              "null argument")) {
    return s;
  }
  return guarded([&] {
    if (!model->state.adam) {
      throw kbio::DataError("checkpoint has no optimizer state; cannot resume");
    }
    auto result = kbio::train_continue(model->state.params, *model->state.adam,
                                       train_set->data, to_core(*train_config));
    if (history_csv_path != nullptr && history_csv_path[0] != '\0') {
      kbio::write_history_csv(result.history, history_csv_path);
    }
    model->state.params = std::move(result.params);
    model->state.adam = std::move(result.adam);
  });
}

kbio_status kbio_model_save(const kbio_model* model, const char* path) {
  if (kbio_status s = require(model != nullptr && path != nullptr, "null argument")) return s;
  return guarded([&] { kbio::save_checkpoint(model->state, path); });
}

kbio_status kbio_model_load(const char* path, kbio_model** out) {
  if (kbio_status s = require(path != nullptr && out != nullptr, "null argument")) return s;
  return guarded([&] { *out = new kbio_model{kbio::load_checkpoint(path)}; });
}

int kbio_model_units(const kbio_model* model) {
  return model == nullptr ? 0 : model->state.params.config.units;
}

int kbio_model_seq_len(const kbio_model* model) {
  return model == nullptr ? 0 : model->state.params.config.max_seq_len;
}

int64_t kbio_model_param_count(const kbio_model* model) {
  if (model == nullptr) return -1;
  return static_cast<int64_t>(kbio::total_trainable(model->state.params));
}

int64_t kbio_model_adam_steps(const kbio_model* model) {
  if (model == nullptr || !model->state.adam) return -1;
  return model->state.adam->t;
}

uint64_t kbio_model_training_seed(const kbio_model* model) {
  return model == nullptr ? 0 : model->state.training_seed;
}

void kbio_model_free(kbio_model* model) { delete model; }

/* ----------------------------------------------------- authentication eval */

kbio_status kbio_eval_auth(const kbio_model* model, const kbio_dataset* test_set,
                           int enrollment_size, int sequence_len, int num_subjects,
                           uint64_t seed, kbio_auth_report** out) {
  if (kbio_status s = require(model != nullptr && test_set != nullptr && out != nullptr,
                              "null argument")) {
    return s;
  }
  return guarded([&] {
    const auto embedder = kbio::model_embedder(model->state.params);
    *out = new kbio_auth_report{kbio::run_auth_protocol(
        embedder, test_set->data, enrollment_size, sequence_len, num_subjects, seed)};
  });
}

double kbio_auth_report_mean_eer(const kbio_auth_report* report) {
  return report == nullptr ? -1.0 : report->report.mean_eer;
}

int kbio_auth_report_num_subjects(const kbio_auth_report* report) {
  return report == nullptr ? 0 : report->report.num_subjects;
}

kbio_status kbio_auth_report_write_eer_csv(const kbio_auth_report* report, const char* path) {
  if (kbio_status s = require(report != nullptr && path != nullptr, "null argument")) return s;
  return guarded([&] { kbio::write_auth_eer_csv(report->report, path); });
}

kbio_status kbio_auth_report_write_roc_csv(const kbio_auth_report* report, const char* path) {
  if (kbio_status s = require(report != nullptr && path != nullptr, "null argument")) return s;
  return guarded([&] { kbio::write_auth_roc_csv(report->report, path); });
}

kbio_status kbio_auth_report_write_roc_svg(const kbio_auth_report* report, const char* path) {
  if (kbio_status s = require(report != nullptr && path != nullptr, "null argument")) return s;
  return guarded([&] { kbio::write_auth_roc_svg(report->report, path); });
}

kbio_status kbio_auth_report_write_summary(const kbio_auth_report* report, const char* path) {
  if (kbio_status s = require(report != nullptr && path != nullptr, "null argument")) return s;
  return guarded([&] { kbio::write_auth_summary(report->report, path); });
}

void kbio_auth_report_free(kbio_auth_report* report) { delete report; }

/* ----------------------------------------------------- identification eval */

kbio_status kbio_eval_ident(const kbio_model* model, const kbio_dataset* test_set,
                            int sequence_len, int background_size, const int* ranks,
                            int num_ranks, const char* prescreen_attribute, uint64_t seed,
                            kbio_ident_report** out) {
  if (kbio_status s = require(model != nullptr && test_set != nullptr && ranks != nullptr &&
                                  num_ranks > 0 && out != nullptr,
                              "null argument")) {
    return s;
  }
  return guarded([&] {
    const auto embedder = kbio::model_embedder(model->state.params);
    const auto data = kbio::build_ident_data(embedder, test_set->data, sequence_len,
                                             background_size, seed);
    const std::vector<int> rank_list(ranks, ranks + num_ranks);
    const std::string attr = prescreen_attribute == nullptr ? "" : prescreen_attribute;
    *out = new kbio_ident_report{
        kbio::rank_n_accuracy(data.background, data.queries, rank_list, attr)};
  });
}

int kbio_ident_report_num_ranks(const kbio_ident_report* report) {
  return report == nullptr ? 0 : static_cast<int>(report->report.rank_accuracy.size());
}

kbio_status kbio_ident_report_rank(const kbio_ident_report* report, int index, int* out_rank,
                                   double* out_accuracy) {
  if (kbio_status s = require(report != nullptr && out_rank != nullptr && out_accuracy != nullptr,
                              "null argument")) {
    return s;
  }
  if (index < 0 || index >= static_cast<int>(report->report.rank_accuracy.size())) {
    return fail(KBIO_ERR_CONFIG, "rank index out of range");
  }
  *out_rank = report->report.rank_accuracy[static_cast<std::size_t>(index)].first;
  *out_accuracy = report->report.rank_accuracy[static_cast<std::size_t>(index)].second;
  return KBIO_OK;
}

kbio_status kbio_ident_report_write_csv(const kbio_ident_report* report, const char* path) {
  if (kbio_status s = require(report != nullptr && path != nullptr, "null argument")) return s;
  return guarded([&] { kbio::write_ident_csv(report->report, path); });
}

kbio_status kbio_ident_report_write_summary(const kbio_ident_report* report, const char* path) {
  if (kbio_status s = require(report != nullptr && path != nullptr, "null argument")) return s;
  return guarded([&] { kbio::write_ident_summary(report->report, path); });
}

void kbio_ident_report_free(kbio_ident_report* report) { delete report; }

/* --------------------------------------------------- input-text dependency */

kbio_status kbio_analyze_text(const kbio_model* model, const kbio_dataset* test_set,
                              int sequence_len, int num_subjects, uint64_t seed,
                              kbio_text_report** out) {
  if (kbio_status s = require(model != nullptr && test_set != nullptr && out != nullptr,
                              "null argument")) {
    return s;
  }
  return guarded([&] {
    const auto embedder = kbio::model_embedder(model->state.params);
    *out = new kbio_text_report{kbio::text_dependency_report(
        embedder, test_set->data, sequence_len, num_subjects, seed)};
  });
}

double kbio_text_report_pearson(const kbio_text_report* report) {
  return report == nullptr ? 0.0 : report->report.pearson_all;
}

double kbio_text_report_slope(const kbio_text_report* report) {
  return report == nullptr ? 0.0 : report->report.slope;
}

double kbio_text_report_intercept(const kbio_text_report* report) {
  return report == nullptr ? 0.0 : report->report.intercept;
}

int kbio_text_report_sample_count(const kbio_text_report* report) {
  return report == nullptr ? 0 : report->report.sample_count;
}

kbio_status kbio_text_report_write_csv(const kbio_text_report* report, const char* path) {
  if (kbio_status s = require(report != nullptr && path != nullptr, "null argument")) return s;
  return guarded([&] { kbio::write_text_csv(report->report, path); });
}

kbio_status kbio_text_report_write_scatter_svg(const kbio_text_report* report,
                                               const char* path) {
  if (kbio_status s = require(report != nullptr && path != nullptr, "null argument")) return s;
  return guarded([&] { kbio::write_text_scatter_svg(report->report, path); });
}

kbio_status kbio_text_report_write_summary(const kbio_text_report* report, const char* path) {
  if (kbio_status s = require(report != nullptr && path != nullptr, "null argument")) return s;
  return guarded([&] { kbio::write_text_summary(report->report, path); });
}

void kbio_text_report_free(kbio_text_report* report) { delete report; }

}  // extern "C"
