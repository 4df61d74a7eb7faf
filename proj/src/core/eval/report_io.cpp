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

#include "core/eval/report_io.hpp"

#include <cstdio>
#include <fstream>

#include "core/analysis/plot.hpp"
#include "core/common.hpp"

namespace kbio {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path + "'");
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw DataError("write to '" + path + "' failed");
}

}  // namespace

void write_auth_eer_csv(const AuthReport& report, const std::string& path) {
  auto out = open_out(path);
  out << "subject_id,eer_percent,genuine_scores,impostor_scores\n";
  for (const auto& subject : report.per_subject) {
    out << subject.subject_id << ',' << format_double(subject.eer) << ','
        << subject.genuine_scores.size() << ',' << subject.impostor_scores.size() << "\n";
  }
  finish(out, path);
}

void write_auth_roc_csv(const AuthReport& report, const std::string& path) {
  auto out = open_out(path);
  out << "threshold,far,frr\n";
  for (const auto& point : report.roc) {
    out << format_double(point.threshold) << ',' << format_double(point.far) << ','
        << format_double(point.frr) << "\n";
  }
  finish(out, path);
}

void write_auth_roc_svg(const AuthReport& report, const std::string& path) {
  Plot plot;
  plot.kind = PlotKind::kRoc;
  plot.title = "verification trade-off (G=" + std::to_string(report.enrollment_size) +
               ", M=" + std::to_string(report.sequence_len) +
               ", k=" + std::to_string(report.num_subjects) + ")";
  plot.x_label = "false acceptance rate";
  plot.y_label = "false rejection rate";
  for (const auto& point : report.roc) plot.points.push_back({point.far, point.frr, 0});
  plot.metadata["mean_eer_percent"] = format_double(report.mean_eer);
  plot.metadata["G"] = std::to_string(report.enrollment_size);
  plot.metadata["M"] = std::to_string(report.sequence_len);
  plot.metadata["k"] = std::to_string(report.num_subjects);
  emit_plot(plot, path);
}

void write_auth_summary(const AuthReport& report, const std::string& path) {
  auto out = open_out(path);
  out << "protocol=auth\n";
  out << "G=" << report.enrollment_size << "\n";
  out << "M=" << report.sequence_len << "\n";
  out << "k=" << report.num_subjects << "\n";
  out << "seed=" << report.seed << "\n";
  out << "mean_eer_percent=" << format_double(report.mean_eer) << "\n";
  out << "genuine_scores_per_subject=" << kNumQueries << "\n";
  out << "impostor_scores_per_subject=" << report.num_subjects - 1 << "\n";
  finish(out, path);
}

void write_ident_csv(const IdentReport& report, const std::string& path) {
  auto out = open_out(path);
  out << "rank,accuracy_percent\n";
  for (const auto& [rank, accuracy] : report.rank_accuracy) {
    out << rank << ',' << format_double(accuracy) << "\n";
  }
  finish(out, path);
}

void write_ident_summary(const IdentReport& report, const std::string& path) {
  auto out = open_out(path);
  out << "protocol=ident\n";
  out << "background_size=" << report.background_size << "\n";
  out << "prescreen_attribute=" << report.prescreen_attribute << "\n";
  out << "ties_observed=" << (report.ties_observed ? 1 : 0) << "\n";
  for (const auto& [rank, accuracy] : report.rank_accuracy) {
    out << "rank_" << rank << "_percent=" << format_double(accuracy) << "\n";
  }
  finish(out, path);
}

void write_text_csv(const CorrelationReport& report, const std::string& path) {
  auto out = open_out(path);
  out << "levenshtein,embed_distance,genuine\n";
  for (const auto& pair : report.pairs) {
    out << pair.lev << ',' << format_double(pair.embed_distance) << ','
        << (pair.genuine ? 1 : 0) << "\n";
  }
  finish(out, path);
}

void write_text_scatter_svg(const CorrelationReport& report, const std::string& path) {
  Plot plot;
  plot.kind = PlotKind::kScatter;
  plot.with_regression = true;
  plot.title = "edit distance vs embedding distance (one-shot, M=" +
               std::to_string(report.sequence_len) + ")";
  plot.x_label = "edit distance";
  plot.y_label = "embedding distance";
  // Subsampled scatter: one genuine + one impostor comparison per subject.
  for (const auto& pair : report.scatter) {
    plot.points.push_back({static_cast<double>(pair.lev), pair.embed_distance,
                           pair.genuine ? 0 : 1});
  }
  plot.metadata["pearson"] = format_double(report.pearson_all);
  plot.metadata["pearson_genuine"] = format_double(report.pearson_genuine);
  plot.metadata["pearson_impostor"] = format_double(report.pearson_impostor);
  plot.metadata["pool_slope"] = format_double(report.slope);
  plot.metadata["pool_intercept"] = format_double(report.intercept);
  plot.metadata["pool_n"] = std::to_string(report.sample_count);
  emit_plot(plot, path);
}

void write_text_summary(const CorrelationReport& report, const std::string& path) {
  auto out = open_out(path);
  out << "protocol=text-dependency\n";
  out << "M=" << report.sequence_len << "\n";
  out << "k=" << report.num_subjects << "\n";
  out << "seed=" << report.seed << "\n";
  out << "samples=" << report.sample_count << "\n";
  out << "pearson=" << format_double(report.pearson_all) << "\n";
  out << "pearson_genuine=" << format_double(report.pearson_genuine) << "\n";
  out << "pearson_impostor=" << format_double(report.pearson_impostor) << "\n";
  out << "slope=" << format_double(report.slope) << "\n";
  out << "intercept=" << format_double(report.intercept) << "\n";
  finish(out, path);
}

void write_history_csv(const TrainHistory& history, const std::string& path) {
  auto out = open_out(path);
  out << "epoch,mean_loss,val_eer\n";
  for (std::size_t i = 0; i < history.epochs.size(); ++i) {
    const auto& epoch = history.epochs[i];
    out << (i + 1) << ',' << format_double(epoch.mean_loss) << ',';
    if (epoch.val_eer) out << format_double(*epoch.val_eer);
    out << "\n";
  }
  finish(out, path);
}

}  // namespace kbio
