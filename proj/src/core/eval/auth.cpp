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

#include "core/eval/auth.hpp"

#include <algorithm>
#include <map>

#include "core/common.hpp"
#include "core/learn/losses.hpp"
#include "core/net/forward.hpp"
#include "core/rng.hpp"

namespace kbio {

BatchEmbedder model_embedder(const ModelParams& params) {
  return [&params](const std::vector<FeatureSequence>& padded) {
    return embed(params, padded);
  };
}

double auth_score(const std::vector<Embedding>& gallery, const Embedding& query) {
  if (gallery.empty()) throw DataError("auth_score: empty gallery");
  double sum = 0.0;
  for (const auto& g : gallery) sum += euclidean_distance(g, query);
  return sum / static_cast<double>(gallery.size());
}

std::vector<SubjectSplit> protocol_splits(const Dataset& test_set, int min_gallery) {
  if (min_gallery < 1) throw ConfigError("protocol: gallery size must be >= 1");
  std::map<std::string, std::vector<std::size_t>> by_subject;
  for (std::size_t i = 0; i < test_set.size(); ++i) {
    by_subject[test_set[i].subject_id].push_back(i);
  }
  std::vector<SubjectSplit> splits;
  for (auto& [subject, indices] : by_subject) {
    if (static_cast<int>(indices.size()) < min_gallery + kNumQueries) continue;
    // Dataset order within a subject is session order; keep it and hold out
    // the last 5 sessions as queries.
    SubjectSplit split;
    split.subject_id = subject;
    split.queries.assign(indices.end() - kNumQueries, indices.end());
    split.gallery.assign(indices.begin(), indices.end() - kNumQueries);
    splits.push_back(std::move(split));
  }
  return splits;
}

AuthReport run_auth_protocol(const BatchEmbedder& embedder, const Dataset& test_set,
                             int enrollment_size, int sequence_len, int num_subjects,
                             std::uint64_t seed) {
  if (enrollment_size < 1) throw ConfigError("auth protocol: G must be >= 1");
  if (sequence_len < 1) throw ConfigError("auth protocol: M must be >= 1");
  if (num_subjects < 2) throw ConfigError("auth protocol: k must be >= 2");

  auto splits = protocol_splits(test_set, enrollment_size);
  if (static_cast<int>(splits.size()) < num_subjects) {
    throw DataError("auth protocol: need " + std::to_string(num_subjects) +
                    " subjects with at least " +
                    std::to_string(enrollment_size + kNumQueries) + " sequences, found " +
                    std::to_string(splits.size()));
  }
  Rng rng(derive_seed(seed, SeedPurpose::kAuthProtocol));
  rng.shuffle(splits);
  splits.resize(static_cast<std::size_t>(num_subjects));
  std::sort(splits.begin(), splits.end(),
            [](const SubjectSplit& a, const SubjectSplit& b) {
              return a.subject_id < b.subject_id;
            });

  // Embed the first G gallery sequences and all queries of each subject.
  std::vector<FeatureSequence> padded;
  std::vector<std::vector<std::size_t>> gallery_rows(splits.size());
  std::vector<std::vector<std::size_t>> query_rows(splits.size());
  for (std::size_t s = 0; s < splits.size(); ++s) {
    for (int g = 0; g < enrollment_size; ++g) {
      gallery_rows[s].push_back(padded.size());
      padded.push_back(pad_or_truncate(
          extract_features(test_set[splits[s].gallery[static_cast<std::size_t>(g)]]),
          sequence_len));
    }
    for (const std::size_t q : splits[s].queries) {
      query_rows[s].push_back(padded.size());
      padded.push_back(pad_or_truncate(extract_features(test_set[q]), sequence_len));
    }
  }
  const auto embeddings = embedder(padded);
  if (embeddings.size() != padded.size()) {
    throw DataError("auth protocol: embedder returned wrong count");
  }

  // One impostor query per subject, the same one against every gallery.
  std::vector<std::size_t> impostor_choice(splits.size());
  for (auto& choice : impostor_choice) choice = rng.below(kNumQueries);

  AuthReport report;
  report.enrollment_size = enrollment_size;
  report.sequence_len = sequence_len;
  report.num_subjects = num_subjects;
  report.seed = seed;

  std::vector<double> pooled_genuine;
  std::vector<double> pooled_impostor;
  for (std::size_t i = 0; i < splits.size(); ++i) {
    std::vector<Embedding> gallery;
    for (const std::size_t row : gallery_rows[i]) gallery.push_back(embeddings[row]);

    SubjectEer entry;
    entry.subject_id = splits[i].subject_id;
    for (const std::size_t row : query_rows[i]) {
      entry.genuine_scores.push_back(auth_score(gallery, embeddings[row]));
    }
    for (std::size_t j = 0; j < splits.size(); ++j) {
      if (j == i) continue;
      const std::size_t row = query_rows[j][impostor_choice[j]];
      entry.impostor_scores.push_back(auth_score(gallery, embeddings[row]));
    }
    entry.eer = compute_eer(entry.genuine_scores, entry.impostor_scores);
    pooled_genuine.insert(pooled_genuine.end(), entry.genuine_scores.begin(),
                          entry.genuine_scores.end());
    pooled_impostor.insert(pooled_impostor.end(), entry.impostor_scores.begin(),
                           entry.impostor_scores.end());
    report.mean_eer += entry.eer;
    report.per_subject.push_back(std::move(entry));
  }
  report.mean_eer /= static_cast<double>(splits.size());
  report.roc = roc_points(pooled_genuine, pooled_impostor);
  return report;
}

}  // namespace kbio
