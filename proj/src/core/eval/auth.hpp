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

#ifndef KBIO_CORE_EVAL_AUTH_HPP_
#define KBIO_CORE_EVAL_AUTH_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "core/data/features.hpp"
#include "core/eval/eer.hpp"
#include "core/net/model.hpp"

namespace kbio {

using Embedding = std::vector<double>;

// Maps padded feature sequences to embeddings, order preserving. The model
// path wraps the network; tests may substitute oracle embedders.
using BatchEmbedder =
    std::function<std::vector<Embedding>(const std::vector<FeatureSequence>&)>;

BatchEmbedder model_embedder(const ModelParams& params);

// Mean Euclidean distance from the query embedding to each gallery
// embedding; the verification score (lower = more genuine).
double auth_score(const std::vector<Embedding>& gallery, const Embedding& query);

struct SubjectEer {
  std::string subject_id;
  double eer = 0.0;  // percent
  std::vector<double> genuine_scores;
  std::vector<double> impostor_scores;
};

struct AuthReport {
  int enrollment_size = 0;  // G
  int sequence_len = 0;     // M
  int num_subjects = 0;     // k
  std::uint64_t seed = 0;
  std::vector<SubjectEer> per_subject;
  double mean_eer = 0.0;            // percent, averaged over subjects
  std::vector<RocPoint> roc;        // pooled over all subjects
};

// Verification protocol: for each of k subjects, enroll G sequences, score
// the subject's 5 held-out queries (genuine) and one query from each other
// subject (impostor), compute a per-subject EER and average. Each subject
// needs at least G + 5 sequences. Deterministic for a fixed seed.
AuthReport run_auth_protocol(const BatchEmbedder& embedder, const Dataset& test_set,
                             int enrollment_size, int sequence_len, int num_subjects,
                             std::uint64_t seed);

// Protocol bookkeeping shared with the identification and analysis paths:
// which sequences act as gallery and which as queries (the last 5 sessions).
struct SubjectSplit {
  std::string subject_id;
  std::vector<std::size_t> gallery;  // indices into the dataset
  std::vector<std::size_t> queries;  // exactly kNumQueries
};
inline constexpr int kNumQueries = 5;

// Subjects with at least min_gallery + 5 sequences, in sorted id order.
std::vector<SubjectSplit> protocol_splits(const Dataset& test_set, int min_gallery);

}  // namespace kbio

#endif  // KBIO_CORE_EVAL_AUTH_HPP_
