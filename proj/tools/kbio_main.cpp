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

// Command-line front end. Everything goes through the shared-library C API;
// exit codes: 0 success, 1 usage/config error, 2 data error, 3 numeric
// failure.

#include <chrono>
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kbio/kbio.h"

namespace {

class ExitWith {
 public:
  explicit ExitWith(int code) : code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

void check(kbio_status status) {
  if (status == KBIO_OK) return;
  std::cerr << "error: " << kbio_last_error() << "\n";
  throw ExitWith(status == KBIO_ERR_INTERNAL ? 1 : static_cast<int>(status));
}

std::string iso_utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Collects resolved settings and input digests; written as key=value text.
class Manifest {
 public:
  void add(const std::string& key, const std::string& value) {
    entries_.emplace_back(key, value);
  }
  void add(const std::string& key, std::uint64_t value) { add(key, std::to_string(value)); }
  void add(const std::string& key, std::int64_t value) { add(key, std::to_string(value)); }
  void add(const std::string& key, int value) { add(key, std::to_string(value)); }
  void add(const std::string& key, double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    add(key, std::string(buf));
  }
  void add_input(const std::string& label, const std::string& path) {
    std::uint64_t digest = 0;
    check(kbio_file_digest(path.c_str(), &digest));
    char buf[24];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, digest);
    add("input." + label + ".path", path);
    add("input." + label + ".fnv1a64", std::string(buf));
  }
  void write(const std::string& path) const {
    if (path.empty()) return;
    std::ofstream out(path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write manifest '" << path << "'\n";
      throw ExitWith(2);
    }
    for (const auto& [key, value] : entries_) out << key << "=" << value << "\n";
  }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

using DatasetPtr = std::unique_ptr<kbio_dataset, decltype(&kbio_dataset_free)>;
using ModelPtr = std::unique_ptr<kbio_model, decltype(&kbio_model_free)>;

DatasetPtr wrap(kbio_dataset* p) { return {p, &kbio_dataset_free}; }
ModelPtr wrap(kbio_model* p) { return {p, &kbio_model_free}; }

// Relative dataset paths resolve against --data-dir (env KBIO_DATA_DIR).
std::string resolve_data_path(const std::string& data_dir, const std::string& path) {
  if (data_dir.empty() || path.empty()) return path;
  const std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(data_dir) / p).string();
}

DatasetPtr load_dataset_arg(const std::string& path) {
  kbio_dataset* raw = nullptr;
  check(kbio_dataset_load(path.c_str(), &raw));
  return wrap(raw);
}

ModelPtr load_model_arg(const std::string& path) {
  kbio_model* raw = nullptr;
  check(kbio_model_load(path.c_str(), &raw));
  return wrap(raw);
}

// Subject-disjoint split helper shared by train/eval/analyze: fraction 0
// means "use the whole file on both sides".
DatasetPtr take_side(const DatasetPtr& all, double fraction, std::uint64_t split_seed,
                     bool train_side) {
  if (fraction <= 0.0) return {nullptr, &kbio_dataset_free};
  kbio_dataset* train = nullptr;
  kbio_dataset* test = nullptr;
  check(kbio_dataset_split(all.get(), fraction, split_seed, &train, &test));
  if (train_side) {
    kbio_dataset_free(test);
    return wrap(train);
  }
  kbio_dataset_free(train);
  return wrap(test);
}

struct GlobalOpts {
  std::string data_dir;
  int threads = 0;
  bool deterministic = false;
};

void apply_threads(const GlobalOpts& global) {
  kbio_set_threads(global.deterministic ? 1 : global.threads);
}

struct SynthOpts {
  kbio_synth_config config{};
  std::string out;
  std::string manifest;
};

int run_synth(const GlobalOpts& global, const SynthOpts& opt) {
  apply_threads(global);
  const std::string out_path = resolve_data_path(global.data_dir, opt.out);

  Manifest manifest;
  manifest.add("tool", std::string("kbio ") + kbio_version());
  manifest.add("command", "synth");
  manifest.add("start_time", iso_utc_now());

  kbio_dataset* raw = nullptr;
  check(kbio_dataset_generate(&opt.config, &raw));
  DatasetPtr data = wrap(raw);
  check(kbio_dataset_save(data.get(), out_path.c_str()));

  std::cout << "wrote " << kbio_dataset_num_sequences(data.get()) << " sequences from "
            << kbio_dataset_num_subjects(data.get()) << " subjects ("
            << kbio_dataset_num_events(data.get()) << " events) to " << out_path << "\n";

  manifest.add("synth.subjects", opt.config.num_subjects);
  manifest.add("synth.sessions", opt.config.sessions_per_subject);
  manifest.add("synth.mean_len", opt.config.mean_sentence_len);
  manifest.add("synth.hold_mean", opt.config.hold_mean);
  manifest.add("synth.hold_between_sd", opt.config.hold_between_sd);
  manifest.add("synth.hold_session_sd", opt.config.hold_session_sd);
  manifest.add("synth.hold_within_sd", opt.config.hold_within_sd);
  manifest.add("synth.gap_mean", opt.config.gap_mean);
  manifest.add("synth.gap_between_sd", opt.config.gap_between_sd);
  manifest.add("synth.gap_session_sd", opt.config.gap_session_sd);
  manifest.add("synth.gap_within_sd", opt.config.gap_within_sd);
  manifest.add("synth.key_offset_sd", opt.config.key_offset_sd);
  manifest.add("synth.hold_style_sd", opt.config.hold_style_sd);
  manifest.add("synth.gap_style_sd", opt.config.gap_style_sd);
  manifest.add("synth.case_flip_prob", opt.config.case_flip_prob);
  manifest.add("seed", opt.config.seed);
  manifest.add("output.dataset", out_path);
  manifest.add("end_time", iso_utc_now());
  manifest.write(opt.manifest);
  return 0;
}

struct TrainOpts {
  std::string data;
  std::string out;
  std::string history;
  std::string manifest;
  std::string resume;
  std::string loss = "triplet";
  kbio_model_config model{};
  kbio_train_config train{};
  double train_fraction = 0.0;
  std::uint64_t split_seed = 1;
};

kbio_loss_kind parse_loss(const std::string& name) {
  if (name == "softmax") return KBIO_LOSS_SOFTMAX;
  if (name == "contrastive") return KBIO_LOSS_CONTRASTIVE;
  if (name == "triplet") return KBIO_LOSS_TRIPLET;
  std::cerr << "error: unknown loss '" << name << "'\n";
  throw ExitWith(1);
}

int run_train(const GlobalOpts& global, TrainOpts opt) {
  apply_threads(global);
  opt.train.loss_kind = parse_loss(opt.loss);
  const std::string data_path = resolve_data_path(global.data_dir, opt.data);

  Manifest manifest;
  manifest.add("tool", std::string("kbio ") + kbio_version());
  manifest.add("command", "train");
  manifest.add("start_time", iso_utc_now());
  manifest.add_input("dataset", data_path);

  DatasetPtr all = load_dataset_arg(data_path);
  DatasetPtr train_split = take_side(all, opt.train_fraction, opt.split_seed, true);
  const kbio_dataset* train_set = train_split ? train_split.get() : all.get();

  std::cout << "training on " << kbio_dataset_num_subjects(train_set) << " subjects, "
            << kbio_dataset_num_sequences(train_set) << " sequences (loss=" << opt.loss
            << ", units=" << opt.model.units << ", M=" << opt.model.max_seq_len << ")\n";

  ModelPtr model{nullptr, &kbio_model_free};
  if (!opt.resume.empty()) {
    model = load_model_arg(opt.resume);
    manifest.add_input("resume_checkpoint", opt.resume);
    check(kbio_train_resume(model.get(), train_set, &opt.train,
                            opt.history.empty() ? nullptr : opt.history.c_str()));
  } else {
    kbio_model* raw = nullptr;
    check(kbio_train(train_set, &opt.model, &opt.train,
                     opt.history.empty() ? nullptr : opt.history.c_str(), &raw));
    model = wrap(raw);
  }
  check(kbio_model_save(model.get(), opt.out.c_str()));
  std::cout << "checkpoint written to " << opt.out << " ("
            << kbio_model_param_count(model.get()) << " trainable parameters, "
            << kbio_model_adam_steps(model.get()) << " optimizer steps)\n";

  manifest.add("loss", opt.loss);
  manifest.add("model.units", opt.model.units);
  manifest.add("model.max_seq_len", opt.model.max_seq_len);
  manifest.add("model.dropout_rate", opt.model.dropout_rate);
  manifest.add("model.recurrent_dropout_rate", opt.model.recurrent_dropout_rate);
  manifest.add("model.bn_momentum", opt.model.bn_momentum);
  manifest.add("model.bn_epsilon", opt.model.bn_epsilon);
  manifest.add("train.learning_rate", opt.train.learning_rate);
  manifest.add("train.beta1", opt.train.beta1);
  manifest.add("train.beta2", opt.train.beta2);
  manifest.add("train.epsilon", opt.train.epsilon);
  manifest.add("train.margin", opt.train.margin);
  manifest.add("train.epochs", opt.train.epochs);
  manifest.add("train.batches_per_epoch", opt.train.batches_per_epoch);
  manifest.add("train.batch_size", opt.train.batch_size);
  manifest.add("train.fraction", opt.train_fraction);
  manifest.add("train.split_seed", opt.split_seed);
  manifest.add("seed", opt.train.seed);
  manifest.add("deterministic", global.deterministic ? 1 : 0);
  manifest.add("output.checkpoint", opt.out);
  if (!opt.history.empty()) manifest.add("output.history", opt.history);
  manifest.add("end_time", iso_utc_now());
  manifest.write(opt.manifest);
  return 0;
}

struct EvalAuthOpts {
  std::string data;
  std::string model;
  std::vector<int> enrollment{5};
  std::vector<int> seq_len{50};
  int num_subjects = 1000;
  std::uint64_t seed = 1;
  double train_fraction = 0.0;
  std::uint64_t split_seed = 1;
  std::string out;
  std::string eer_csv, roc_csv, roc_svg, summary, manifest;
};

int run_eval_auth(const GlobalOpts& global, const EvalAuthOpts& opt) {
  apply_threads(global);
  const std::string data_path = resolve_data_path(global.data_dir, opt.data);

  Manifest manifest;
  manifest.add("tool", std::string("kbio ") + kbio_version());
  manifest.add("command", "eval-auth");
  manifest.add("start_time", iso_utc_now());
  manifest.add_input("dataset", data_path);
  manifest.add_input("checkpoint", opt.model);

  DatasetPtr all = load_dataset_arg(data_path);
  DatasetPtr test_split = take_side(all, opt.train_fraction, opt.split_seed, false);
  const kbio_dataset* test_set = test_split ? test_split.get() : all.get();
  ModelPtr model = load_model_arg(opt.model);

  const bool single_cell = opt.enrollment.size() == 1 && opt.seq_len.size() == 1;
  if (!single_cell &&
      (!opt.eer_csv.empty() || !opt.roc_csv.empty() || !opt.roc_svg.empty() ||
       !opt.summary.empty())) {
    std::cerr << "error: per-cell outputs need a single G and a single M\n";
    return 1;
  }

  std::ofstream grid(opt.out, std::ios::binary);
  if (!grid) {
    std::cerr << "error: cannot write '" << opt.out << "'\n";
    return 2;
  }
  grid << "m";
  for (const int g : opt.enrollment) grid << ",g=" << g;
  grid << "\n";

  std::cout << "mean EER (%) over k=" << opt.num_subjects << " subjects\n";
  std::cout << "   M";
  for (const int g : opt.enrollment) std::printf("    G=%-3d", g);
  std::cout << "\n";

  for (const int m : opt.seq_len) {
    grid << m;
    std::printf("%4d", m);
    for (const int g : opt.enrollment) {
      kbio_auth_report* raw = nullptr;
      check(kbio_eval_auth(model.get(), test_set, g, m, opt.num_subjects, opt.seed, &raw));
      std::unique_ptr<kbio_auth_report, decltype(&kbio_auth_report_free)> report{
          raw, &kbio_auth_report_free};
      const double eer = kbio_auth_report_mean_eer(report.get());
      char cell[32];
      std::snprintf(cell, sizeof cell, "%.6f", eer);
      grid << ',' << cell;
      std::printf("  %7.3f", eer);
      manifest.add("result.eer_percent.m" + std::to_string(m) + ".g" + std::to_string(g),
                   eer);
      if (single_cell) {
        if (!opt.eer_csv.empty())
          check(kbio_auth_report_write_eer_csv(report.get(), opt.eer_csv.c_str()));
        if (!opt.roc_csv.empty())
          check(kbio_auth_report_write_roc_csv(report.get(), opt.roc_csv.c_str()));
        if (!opt.roc_svg.empty())
          check(kbio_auth_report_write_roc_svg(report.get(), opt.roc_svg.c_str()));
        if (!opt.summary.empty())
          check(kbio_auth_report_write_summary(report.get(), opt.summary.c_str()));
      }
    }
    grid << "\n";
    std::cout << "\n";
  }
  grid.flush();
  if (!grid) {
    std::cerr << "error: write to '" << opt.out << "' failed\n";
    return 2;
  }

  manifest.add("G", [&] {
    std::string s;
    for (const int g : opt.enrollment) s += (s.empty() ? "" : ";") + std::to_string(g);
    return s;
  }());
  manifest.add("M", [&] {
    std::string s;
    for (const int m : opt.seq_len) s += (s.empty() ? "" : ";") + std::to_string(m);
    return s;
  }());
  manifest.add("k", opt.num_subjects);
  manifest.add("seed", opt.seed);
  manifest.add("eval.fraction", opt.train_fraction);
  manifest.add("eval.split_seed", opt.split_seed);
  manifest.add("deterministic", global.deterministic ? 1 : 0);
  manifest.add("output.grid", opt.out);
  manifest.add("end_time", iso_utc_now());
  manifest.write(opt.manifest);
  return 0;
}

struct EvalIdentOpts {
  std::string data;
  std::string model;
  std::vector<int> ranks{1, 50, 100};
  int seq_len = 50;
  int background = 1000;
  std::string prescreen;
  std::uint64_t seed = 1;
  double train_fraction = 0.0;
  std::uint64_t split_seed = 1;
  std::string out, summary, manifest;
};

int run_eval_ident(const GlobalOpts& global, const EvalIdentOpts& opt) {
  apply_threads(global);
  const std::string data_path = resolve_data_path(global.data_dir, opt.data);

  Manifest manifest;
  manifest.add("tool", std::string("kbio ") + kbio_version());
  manifest.add("command", "eval-ident");
  manifest.add("start_time", iso_utc_now());
  manifest.add_input("dataset", data_path);
  manifest.add_input("checkpoint", opt.model);

  DatasetPtr all = load_dataset_arg(data_path);
  DatasetPtr test_split = take_side(all, opt.train_fraction, opt.split_seed, false);
  const kbio_dataset* test_set = test_split ? test_split.get() : all.get();
  ModelPtr model = load_model_arg(opt.model);

  kbio_ident_report* raw = nullptr;
  check(kbio_eval_ident(model.get(), test_set, opt.seq_len, opt.background,
                        opt.ranks.data(), static_cast<int>(opt.ranks.size()),
                        opt.prescreen.empty() ? nullptr : opt.prescreen.c_str(), opt.seed,
                        &raw));
  std::unique_ptr<kbio_ident_report, decltype(&kbio_ident_report_free)> report{
      raw, &kbio_ident_report_free};

  std::cout << "identification accuracy (%) over background of " << opt.background
            << (opt.prescreen.empty() ? "" : " with pre-screening by " + opt.prescreen)
            << "\n";
  for (int i = 0; i < kbio_ident_report_num_ranks(report.get()); ++i) {
    int rank = 0;
    double accuracy = 0.0;
    check(kbio_ident_report_rank(report.get(), i, &rank, &accuracy));
    std::printf("  rank-%-4d %7.3f\n", rank, accuracy);
    manifest.add("result.rank_" + std::to_string(rank) + "_percent", accuracy);
  }
  if (!opt.out.empty()) check(kbio_ident_report_write_csv(report.get(), opt.out.c_str()));
  if (!opt.summary.empty())
    check(kbio_ident_report_write_summary(report.get(), opt.summary.c_str()));

  manifest.add("M", opt.seq_len);
  manifest.add("background", opt.background);
  manifest.add("prescreen", opt.prescreen);
  manifest.add("seed", opt.seed);
  manifest.add("deterministic", global.deterministic ? 1 : 0);
  if (!opt.out.empty()) manifest.add("output.csv", opt.out);
  manifest.add("end_time", iso_utc_now());
  manifest.write(opt.manifest);
  return 0;
}

struct AnalyzeOpts {
  std::string data;
  std::string model;
  int seq_len = 50;
  int num_subjects = 1000;
  std::uint64_t seed = 1;
  double train_fraction = 0.0;
  std::uint64_t split_seed = 1;
  std::string out_csv, plot, summary, manifest;
};

int run_analyze(const GlobalOpts& global, const AnalyzeOpts& opt) {
  apply_threads(global);
  const std::string data_path = resolve_data_path(global.data_dir, opt.data);

  Manifest manifest;
  manifest.add("tool", std::string("kbio ") + kbio_version());
  manifest.add("command", "analyze");
  manifest.add("start_time", iso_utc_now());
  manifest.add_input("dataset", data_path);
  manifest.add_input("checkpoint", opt.model);

  DatasetPtr all = load_dataset_arg(data_path);
  DatasetPtr test_split = take_side(all, opt.train_fraction, opt.split_seed, false);
  const kbio_dataset* test_set = test_split ? test_split.get() : all.get();
  ModelPtr model = load_model_arg(opt.model);

  kbio_text_report* raw = nullptr;
  check(kbio_analyze_text(model.get(), test_set, opt.seq_len, opt.num_subjects, opt.seed,
                          &raw));
  std::unique_ptr<kbio_text_report, decltype(&kbio_text_report_free)> report{
      raw, &kbio_text_report_free};

  std::printf("input-text dependency over %d comparisons\n",
              kbio_text_report_sample_count(report.get()));
  std::printf("  pearson   %+.6f\n", kbio_text_report_pearson(report.get()));
  std::printf("  slope     %+.6f\n", kbio_text_report_slope(report.get()));
  std::printf("  intercept %+.6f\n", kbio_text_report_intercept(report.get()));

  if (!opt.out_csv.empty()) check(kbio_text_report_write_csv(report.get(), opt.out_csv.c_str()));
  if (!opt.plot.empty())
    check(kbio_text_report_write_scatter_svg(report.get(), opt.plot.c_str()));
  if (!opt.summary.empty())
    check(kbio_text_report_write_summary(report.get(), opt.summary.c_str()));

  manifest.add("M", opt.seq_len);
  manifest.add("k", opt.num_subjects);
  manifest.add("seed", opt.seed);
  manifest.add("result.pearson", kbio_text_report_pearson(report.get()));
  manifest.add("result.slope", kbio_text_report_slope(report.get()));
  manifest.add("deterministic", global.deterministic ? 1 : 0);
  manifest.add("end_time", iso_utc_now());
  manifest.write(opt.manifest);
  return 0;
}

struct InfoOpts {
  std::string model;
  int units = 128;
  int seq_len = 50;
  int classes = 0;
};

int run_info(const GlobalOpts& global, const InfoOpts& opt) {
  (void)global;
  std::cout << "kbio " << kbio_version() << "\n";
  if (!opt.model.empty()) {
    ModelPtr model = load_model_arg(opt.model);
    std::cout << "checkpoint: " << opt.model << "\n";
    std::cout << "  units: " << kbio_model_units(model.get()) << "\n";
    std::cout << "  max_seq_len: " << kbio_model_seq_len(model.get()) << "\n";
    std::cout << "  trainable parameters: " << kbio_model_param_count(model.get()) << "\n";
    std::cout << "  optimizer steps: " << kbio_model_adam_steps(model.get()) << "\n";
    std::cout << "  training seed: " << kbio_model_training_seed(model.get()) << "\n";
    return 0;
  }
  kbio_model_config config;
  kbio_model_config_init(&config);
  config.units = opt.units;
  config.max_seq_len = opt.seq_len;
  const std::int64_t count = kbio_count_params(&config, opt.classes);
  if (count < 0) {
    std::cerr << "error: " << kbio_last_error() << "\n";
    return 1;
  }
  std::cout << "architecture: 2x" << opt.units
            << " recurrent units, batch norm, M=" << opt.seq_len << "\n";
  std::cout << "trainable parameters: " << count;
  if (opt.classes > 0) std::cout << " (with " << opt.classes << "-class head)";
  std::cout << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kbio: keystroke-dynamics biometrics toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Configuration file (key = value, [section] headers)");
  app.get_config_formatter_base()->section("");

  GlobalOpts global;
  app.add_option("--data-dir", global.data_dir,
                 "Default directory for relative dataset paths")
      ->envname("KBIO_DATA_DIR");
  app.add_option("--threads", global.threads, "Worker threads (0 = library default)")
      ->capture_default_str();
  app.add_flag("--deterministic", global.deterministic,
               "Single-worker fixed-order execution for bit-exact reproduction");

  SynthOpts synth;
  kbio_synth_config_init(&synth.config);
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic keystroke dataset");
  synth_cmd->add_option("--subjects", synth.config.num_subjects, "Number of subjects")
      ->required();
  synth_cmd->add_option("--sessions", synth.config.sessions_per_subject,
                        "Sessions per subject")->capture_default_str();
  synth_cmd->add_option("--mean-len", synth.config.mean_sentence_len,
                        "Mean keystrokes per session")->capture_default_str();
  synth_cmd->add_option("--hold-mean", synth.config.hold_mean, "Population mean hold time (s)")
      ->capture_default_str();
  synth_cmd->add_option("--hold-between-sd", synth.config.hold_between_sd,
                        "Between-subject sd of mean hold (s)")->capture_default_str();
  synth_cmd->add_option("--hold-session-sd", synth.config.hold_session_sd,
                        "Per-session hold pace sd (s)")->capture_default_str();
  synth_cmd->add_option("--hold-within-sd", synth.config.hold_within_sd,
                        "Within-subject hold sd (s)")->capture_default_str();
  synth_cmd->add_option("--gap-mean", synth.config.gap_mean,
                        "Population mean release-to-press gap (s)")->capture_default_str();
  synth_cmd->add_option("--gap-between-sd", synth.config.gap_between_sd,
                        "Between-subject sd of mean gap (s)")->capture_default_str();
  synth_cmd->add_option("--gap-session-sd", synth.config.gap_session_sd,
                        "Per-session gap pace sd (s)")->capture_default_str();
  synth_cmd->add_option("--gap-within-sd", synth.config.gap_within_sd,
                        "Within-subject gap sd (s)")->capture_default_str();
  synth_cmd->add_option("--key-offset-sd", synth.config.key_offset_sd,
                        "Per-key hold offset sd (s)")->capture_default_str();
  synth_cmd->add_option("--hold-style-sd", synth.config.hold_style_sd,
                        "Per-subject hold style scale sd (s)")->capture_default_str();
  synth_cmd->add_option("--gap-style-sd", synth.config.gap_style_sd,
                        "Per-subject gap style scale sd (s)")->capture_default_str();
  synth_cmd->add_option("--case-flip-prob", synth.config.case_flip_prob,
                        "Probability a session is typed in uppercase")->capture_default_str();
  synth_cmd->add_option("--seed", synth.config.seed, "Generator seed")->capture_default_str();
  synth_cmd->add_option("--out", synth.out, "Output dataset file")->required();
  synth_cmd->add_option("--manifest", synth.manifest, "Write a run manifest here");

  TrainOpts train;
  kbio_model_config_init(&train.model);
  kbio_train_config_init(&train.train);
  auto* train_cmd = app.add_subcommand("train", "Train an embedding model");
  train_cmd->add_option("--data", train.data, "Training dataset file")->required();
  train_cmd->add_option("--out", train.out, "Output checkpoint file")->required();
  train_cmd->add_option("--loss", train.loss, "softmax | contrastive | triplet")
      ->capture_default_str();
  train_cmd->add_option("--units", train.model.units, "Recurrent units per layer")
      ->capture_default_str();
  train_cmd->add_option("--seq-len", train.model.max_seq_len, "Keystrokes per sequence (M)")
      ->capture_default_str();
  train_cmd->add_option("--dropout", train.model.dropout_rate, "Inter-layer dropout rate")
      ->capture_default_str();
  train_cmd->add_option("--recurrent-dropout", train.model.recurrent_dropout_rate,
                        "Recurrent dropout rate")->capture_default_str();
  train_cmd->add_option("--bn-momentum", train.model.bn_momentum,
                        "Batch-norm running-statistics momentum")->capture_default_str();
  train_cmd->add_option("--bn-epsilon", train.model.bn_epsilon, "Batch-norm epsilon")
      ->capture_default_str();
  train_cmd->add_option("--lr", train.train.learning_rate, "Learning rate")
      ->capture_default_str();
  train_cmd->add_option("--beta1", train.train.beta1, "Adam beta1")->capture_default_str();
  train_cmd->add_option("--beta2", train.train.beta2, "Adam beta2")->capture_default_str();
  train_cmd->add_option("--adam-epsilon", train.train.epsilon, "Adam epsilon")
      ->capture_default_str();
  train_cmd->add_option("--margin", train.train.margin, "Margin alpha")->capture_default_str();
  train_cmd->add_option("--epochs", train.train.epochs, "Training epochs")
      ->capture_default_str();
  train_cmd->add_option("--batches-per-epoch", train.train.batches_per_epoch,
                        "Batches per epoch")->capture_default_str();
  train_cmd->add_option("--batch-size", train.train.batch_size, "Sequences/pairs per batch")
      ->capture_default_str();
  train_cmd->add_option("--seed", train.train.seed, "Training seed")->capture_default_str();
  train_cmd->add_option("--train-fraction", train.train_fraction,
                        "Train on this subject fraction (0 = whole file)")
      ->capture_default_str();
  train_cmd->add_option("--split-seed", train.split_seed, "Subject split seed")
      ->capture_default_str();
  train_cmd->add_option("--history", train.history, "Write per-epoch loss CSV here");
  train_cmd->add_option("--resume", train.resume, "Continue from this checkpoint");
  train_cmd->add_option("--manifest", train.manifest, "Write a run manifest here");

  EvalAuthOpts auth;
  auto* auth_cmd = app.add_subcommand("eval-auth", "Verification protocol (per-subject EER)");
  auth_cmd->add_option("--data", auth.data, "Dataset file")->required();
  auth_cmd->add_option("--model", auth.model, "Checkpoint file")->required();
  auth_cmd->add_option("--G", auth.enrollment, "Enrollment sequences per subject (list)")
      ->capture_default_str();
  auth_cmd->add_option("--M", auth.seq_len, "Keystrokes per sequence (list)")
      ->capture_default_str();
  auth_cmd->add_option("--k", auth.num_subjects, "Number of test subjects")
      ->capture_default_str();
  auth_cmd->add_option("--seed", auth.seed, "Protocol seed")->capture_default_str();
  auth_cmd->add_option("--train-fraction", auth.train_fraction,
                       "Evaluate on the held-out side of this split (0 = whole file)")
      ->capture_default_str();
  auth_cmd->add_option("--split-seed", auth.split_seed, "Subject split seed")
      ->capture_default_str();
  auth_cmd->add_option("--out", auth.out, "Mean-EER grid CSV (rows M, columns G)")
      ->required();
  auth_cmd->add_option("--eer-csv", auth.eer_csv, "Per-subject EER CSV (single cell only)");
  auth_cmd->add_option("--roc-csv", auth.roc_csv, "Pooled ROC points CSV (single cell only)");
  auth_cmd->add_option("--roc-svg", auth.roc_svg, "ROC plot SVG (single cell only)");
  auth_cmd->add_option("--summary", auth.summary, "Plain-text summary (single cell only)");
  auth_cmd->add_option("--manifest", auth.manifest, "Write a run manifest here");

  EvalIdentOpts ident;
  auto* ident_cmd = app.add_subcommand("eval-ident", "Identification protocol (rank-n)");
  ident_cmd->add_option("--data", ident.data, "Dataset file")->required();
  ident_cmd->add_option("--model", ident.model, "Checkpoint file")->required();
  ident_cmd->add_option("--ranks", ident.ranks, "Ranks to report")->capture_default_str();
  ident_cmd->add_option("--M", ident.seq_len, "Keystrokes per sequence")
      ->capture_default_str();
  ident_cmd->add_option("--background", ident.background, "Background size B")
      ->capture_default_str();
  ident_cmd->add_option("--prescreen", ident.prescreen,
                        "Pre-screen background by this attribute (e.g. country)");
  ident_cmd->add_option("--seed", ident.seed, "Protocol seed")->capture_default_str();
  ident_cmd->add_option("--train-fraction", ident.train_fraction,
                        "Evaluate on the held-out side of this split (0 = whole file)")
      ->capture_default_str();
  ident_cmd->add_option("--split-seed", ident.split_seed, "Subject split seed")
      ->capture_default_str();
  ident_cmd->add_option("--out", ident.out, "Rank-accuracy CSV");
  ident_cmd->add_option("--summary", ident.summary, "Plain-text summary");
  ident_cmd->add_option("--manifest", ident.manifest, "Write a run manifest here");

  AnalyzeOpts analyze;
  auto* analyze_cmd =
      app.add_subcommand("analyze", "Input-text dependency (edit distance vs scores)");
  analyze_cmd->add_option("--data", analyze.data, "Dataset file")->required();
  analyze_cmd->add_option("--model", analyze.model, "Checkpoint file")->required();
  analyze_cmd->add_option("--M", analyze.seq_len, "Keystrokes per sequence")
      ->capture_default_str();
  analyze_cmd->add_option("--k", analyze.num_subjects, "Number of test subjects")
      ->capture_default_str();
  analyze_cmd->add_option("--seed", analyze.seed, "Protocol seed")->capture_default_str();
  analyze_cmd->add_option("--train-fraction", analyze.train_fraction,
                          "Evaluate on the held-out side of this split (0 = whole file)")
      ->capture_default_str();
  analyze_cmd->add_option("--split-seed", analyze.split_seed, "Subject split seed")
      ->capture_default_str();
  analyze_cmd->add_option("--out-csv", analyze.out_csv, "All (edit, embedding) pairs CSV");
  analyze_cmd->add_option("--plot", analyze.plot, "Scatter + regression SVG");
  analyze_cmd->add_option("--summary", analyze.summary, "Plain-text summary");
  analyze_cmd->add_option("--manifest", analyze.manifest, "Write a run manifest here");

  InfoOpts info;
  auto* info_cmd = app.add_subcommand("info", "Version, architecture, checkpoint details");
  info_cmd->add_option("--model", info.model, "Inspect this checkpoint");
  info_cmd->add_option("--units", info.units, "Units for parameter counting")
      ->capture_default_str();
  info_cmd->add_option("--seq-len", info.seq_len, "M for parameter counting")
      ->capture_default_str();
  info_cmd->add_option("--classes", info.classes, "Classifier head classes (0 = none)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (synth_cmd->parsed()) return run_synth(global, synth);
    if (train_cmd->parsed()) return run_train(global, train);
    if (auth_cmd->parsed()) return run_eval_auth(global, auth);
    if (ident_cmd->parsed()) return run_eval_ident(global, ident);
    if (analyze_cmd->parsed()) return run_analyze(global, analyze);
    if (info_cmd->parsed()) return run_info(global, info);
  } catch (const ExitWith& e) {
    return e.code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
