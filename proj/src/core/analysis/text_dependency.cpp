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

#include "core/analysis/text_dependency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/analysis/levenshtein.hpp"
#include "core/analysis/stats.hpp"
#include "core/common.hpp"
#include "core/learn/losses.hpp"
#include "core/rng.hpp"

namespace kbio {

namespace {

std::vector<int> keycodes_truncated(const KeystrokeSequence& seq, int max_len) {
  std::vector<int> keys;
  const std::size_t n = std::min(seq.events.size(), static_cast<std::size_t>(max_len));
  keys.reserve(n);
  for (std::size_t i = 0; i < n; ++i) keys.push_back(seq.events[i].keycode);
  return keys;
}

double guarded_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  try {
    return pearson(x, y);
  } catch (const std::exception&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

CorrelationReport text_dependency_report(const BatchEmbedder& embedder,
                                         const Dataset& test_set, int sequence_len,
                                         int num_subjects, std::uint64_t seed) {
  if (sequence_len < 1) throw ConfigError("text dependency: M must be >= 1");
  if (num_subjects < 2) throw ConfigError("text dependency: k must be >= 2");

  auto splits = protocol_splits(test_set, 1);  // one-shot: G = 1
  if (static_cast<int>(splits.size()) < num_subjects) {
    throw DataError("text dependency: need " + std::to_string(num_subjects) +
                    " subjects with at least " + std::to_string(1 + kNumQueries) +
                    " sequences, found " + std::to_string(splits.size()));
  }
  Rng rng(derive_seed(seed, SeedPurpose::kAnalysis));
  rng.shuffle(splits);
  splits.resize(static_cast<std::size_t>(num_subjects));
  std::sort(splits.begin(), splits.end(),
            [](const SubjectSplit& a, const SubjectSplit& b) {
              return a.subject_id < b.subject_id;
            });

  std::vector<FeatureSequence> padded;
  std::vector<std::size_t> gallery_row(splits.size());
  std::vector<std::vector<std::size_t>> query_rows(splits.size());
  std::vector<std::vector<int>> gallery_keys(splits.size());
  std::vector<std::vector<std::vector<int>>> query_keys(splits.size());
  for (std::size_t s = 0; s < splits.size(); ++s) {
    const KeystrokeSequence& gal = test_set[splits[s].gallery.front()];
    gallery_row[s] = padded.size();
    padded.push_back(pad_or_truncate(extract_features(gal), sequence_len));
    gallery_keys[s] = keycodes_truncated(gal, sequence_len);
    for (const std::size_t q : splits[s].queries) {
      query_rows[s].push_back(padded.size());
      padded.push_back(pad_or_truncate(extract_features(test_set[q]), sequence_len));
      query_keys[s].push_back(keycodes_truncated(test_set[q], sequence_len));
    }
  }
  const auto embeddings = embedder(padded);
  if (embeddings.size() != padded.size()) {
    throw DataError("text dependency: embedder returned wrong count");
  }

  std::vector<std::size_t> impostor_choice(splits.size());
  for (auto& choice : impostor_choice) choice = rng.below(kNumQueries);

  CorrelationReport report;
  report.sequence_len = sequence_len;
  report.num_subjects = num_subjects;
  report.seed = seed;

  for (std::size_t i = 0; i < splits.size(); ++i) {
    const auto& gal_emb = embeddings[gallery_row[i]];
    for (std::size_t q = 0; q < query_rows[i].size(); ++q) {
      TextScorePair pair;
      pair.genuine = true;
      pair.lev = levenshtein(gallery_keys[i], query_keys[i][q]);
      pair.embed_distance = euclidean_distance(gal_emb, embeddings[query_rows[i][q]]);
      report.pairs.push_back(pair);
    }
    for (std::size_t j = 0; j < splits.size(); ++j) {
      if (j == i) continue;
      const std::size_t pick = impostor_choice[j];
      TextScorePair pair;
      pair.genuine = false;
      pair.lev = levenshtein(gallery_keys[i], query_keys[j][pick]);
      pair.embed_distance =
          euclidean_distance(gal_emb, embeddings[query_rows[j][pick]]);
      report.pairs.push_back(pair);
    }
  }
  report.sample_count = static_cast<int>(report.pairs.size());

  std::vector<double> lev_all, dist_all, lev_gen, dist_gen, lev_imp, dist_imp;
  for (const auto& pair : report.pairs) {
    lev_all.push_back(pair.lev);
    dist_all.push_back(pair.embed_distance);
    if (pair.genuine) {
      lev_gen.push_back(pair.lev);
      dist_gen.push_back(pair.embed_distance);
    } else {
      lev_imp.push_back(pair.lev);
      dist_imp.push_back(pair.embed_distance);
    }
  }
  report.pearson_all = pearson(lev_all, dist_all);
  report.pearson_genuine = guarded_pearson(lev_gen, dist_gen);
  report.pearson_impostor = guarded_pearson(lev_imp, dist_imp);
  const LinearFit fit = linear_regression(lev_all, dist_all);
  report.slope = fit.slope;
  report.intercept = fit.intercept;

  // Plot subsample: one genuine and one impostor comparison per subject.
  Rng plot_rng(derive_seed(seed, SeedPurpose::kPlot));
  const std::size_t per_subject = kNumQueries + splits.size() - 1;
  for (std::size_t i = 0; i < splits.size(); ++i) {
    const std::size_t base = i * per_subject;
    report.scatter.push_back(report.pairs[base + plot_rng.below(kNumQueries)]);
    report.scatter.push_back(
        report.pairs[base + kNumQueries + plot_rng.below(splits.size() - 1)]);
  }
  return report;
}

}  // namespace kbio
