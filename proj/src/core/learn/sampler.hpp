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

#ifndef KBIO_CORE_LEARN_SAMPLER_HPP_
#define KBIO_CORE_LEARN_SAMPLER_HPP_

#include <string>
#include <vector>

#include "core/data/features.hpp"
#include "core/rng.hpp"

namespace kbio {

// Training pool: every sequence padded to the model length, indexed by
// subject. Subjects are sorted by id so sampling is order-independent.
struct TrainData {
  std::vector<FeatureSequence> padded;
  std::vector<std::string> subjects;
  std::vector<std::vector<std::size_t>> by_subject;
};

TrainData prepare_train_data(const Dataset& dataset, int target_len);

// Index-based batches; the trainer materializes network inputs from these.
struct PairSample {
  std::size_t a = 0;
  std::size_t b = 0;
  int label = 0;  // 0 genuine, 1 impostor
};

struct TripletSample {
  std::size_t anchor = 0;
  std::size_t positive = 0;
  std::size_t negative = 0;
};

// Genuine and impostor counts balanced within one; genuine pairs are two
// distinct sessions of one subject, impostor pairs cross subjects.
std::vector<PairSample> sample_pair_batch(const TrainData& data, int batch_size, Rng& rng);

// Anchor and positive share a subject; the negative comes from another.
std::vector<TripletSample> sample_triplet_batch(const TrainData& data, int batch_size,
                                                Rng& rng);

}  // namespace kbio

#endif  // KBIO_CORE_LEARN_SAMPLER_HPP_
