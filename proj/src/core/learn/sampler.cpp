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

#include "core/learn/sampler.hpp"

#include <algorithm>

#include "core/common.hpp"

namespace kbio {

TrainData prepare_train_data(const Dataset& dataset, int target_len) {
  TrainData data;
  data.padded = extract_all(dataset, target_len);
  data.subjects = subject_ids(dataset);
  std::sort(data.subjects.begin(), data.subjects.end());
  data.by_subject.resize(data.subjects.size());
  for (std::size_t i = 0; i < data.padded.size(); ++i) {
    const auto it = std::lower_bound(data.subjects.begin(), data.subjects.end(),
                                     data.padded[i].subject_id);
    data.by_subject[static_cast<std::size_t>(it - data.subjects.begin())].push_back(i);
  }
  return data;
}

namespace {

std::vector<std::size_t> subjects_with_pairs(const TrainData& data) {
  std::vector<std::size_t> eligible;
  for (std::size_t s = 0; s < data.by_subject.size(); ++s) {
    if (data.by_subject[s].size() >= 2) eligible.push_back(s);
  }
  return eligible;
}

void check_pool(const TrainData& data, const std::vector<std::size_t>& eligible) {
  if (data.subjects.size() < 2) {
    throw DataError("sampler: need at least 2 subjects, got " +
                    std::to_string(data.subjects.size()));
  }
  if (eligible.empty()) {
    throw DataError("sampler: no subject has 2 or more sequences");
  }
}

// Two distinct indices in [0, n).
std::pair<std::size_t, std::size_t> two_distinct(Rng& rng, std::size_t n) {
  const std::size_t first = rng.below(n);
  std::size_t second = rng.below(n - 1);
  if (second >= first) ++second;
  return {first, second};
}

}  // namespace

std::vector<PairSample> sample_pair_batch(const TrainData& data, int batch_size, Rng& rng) {
  if (batch_size < 1) throw ConfigError("sample_pair_batch: batch size must be >= 1");
  const auto eligible = subjects_with_pairs(data);
  check_pool(data, eligible);

  const int genuine = (batch_size + 1) / 2;
  std::vector<PairSample> batch;
  batch.reserve(static_cast<std::size_t>(batch_size));
  for (int i = 0; i < genuine; ++i) {
    const auto& sessions = data.by_subject[eligible[rng.below(eligible.size())]];
    const auto [a, b] = two_distinct(rng, sessions.size());
    batch.push_back({sessions[a], sessions[b], 0});
  }
  for (int i = genuine; i < batch_size; ++i) {
    const auto [s1, s2] = two_distinct(rng, data.subjects.size());
    const auto& first = data.by_subject[s1];
    const auto& second = data.by_subject[s2];
    if (first.empty() || second.empty()) {
      throw DataError("sampler: subject without sequences");
    }
    batch.push_back({first[rng.below(first.size())], second[rng.below(second.size())], 1});
  }
  return batch;
}

std::vector<TripletSample> sample_triplet_batch(const TrainData& data, int batch_size,
                                                Rng& rng) {
  if (batch_size < 1) throw ConfigError("sample_triplet_batch: batch size must be >= 1");
  const auto eligible = subjects_with_pairs(data);
  check_pool(data, eligible);

  std::vector<TripletSample> batch;
  batch.reserve(static_cast<std::size_t>(batch_size));
  for (int i = 0; i < batch_size; ++i) {
    const std::size_t anchor_subject = eligible[rng.below(eligible.size())];
    const auto& sessions = data.by_subject[anchor_subject];
    const auto [a, p] = two_distinct(rng, sessions.size());
    std::size_t other = rng.below(data.subjects.size() - 1);
    if (other >= anchor_subject) ++other;
    const auto& negatives = data.by_subject[other];
    if (negatives.empty()) throw DataError("sampler: subject without sequences");
    batch.push_back({sessions[a], sessions[p], negatives[rng.below(negatives.size())]});
  }
  return batch;
}

}  // namespace kbio
