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

#ifndef KBIO_CORE_LEARN_TRAINER_HPP_
#define KBIO_CORE_LEARN_TRAINER_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/data/keystroke.hpp"
#include "core/learn/adam.hpp"
#include "core/net/model.hpp"

namespace kbio {

enum class LossKind { kSoftmax, kContrastive, kTriplet };

std::string to_string(LossKind kind);
LossKind loss_kind_from_string(const std::string& name);

struct TrainConfig {
  LossKind loss_kind = LossKind::kTriplet;
  double learning_rate = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double margin = 1.5;  // alpha, shared by contrastive and triplet
  int epochs = 200;
  int batches_per_epoch = 150;
  int batch_size = 512;
  std::uint64_t seed = 1;
};

void validate(const TrainConfig& config);

struct EpochStats {
  double mean_loss = 0.0;
  double seconds = 0.0;
  std::optional<double> val_eer;  // populated only by external validation
};

struct TrainHistory {
  std::vector<EpochStats> epochs;
};

struct TrainResult {
  ModelParams params;
  AdamState adam;
  TrainHistory history;
};

// Trains a fresh model on `train_set` (which must already exclude any
// evaluation subjects). Softmax mode attaches a classifier head over the
// training subjects and drops it from the returned params so embeddings
// always come from the recurrent stack. Contrastive/triplet branches share
// the single ModelParams instance; branch gradients are accumulated before
// each optimizer step. Deterministic per seed.
TrainResult train(const Dataset& train_set, const ModelConfig& model_config,
                  const TrainConfig& train_config);

// Continues training from an existing model and optimizer state; the step
// counter is preserved.
TrainResult train_continue(ModelParams params, AdamState adam, const Dataset& train_set,
                           const TrainConfig& train_config);

}  // namespace kbio

#endif  // KBIO_CORE_LEARN_TRAINER_HPP_
