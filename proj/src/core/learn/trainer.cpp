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

#include "core/learn/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "core/common.hpp"
#include "core/learn/losses.hpp"
#include "core/learn/sampler.hpp"
#include "core/net/forward.hpp"

namespace kbio {

std::string to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kSoftmax: return "softmax";
    case LossKind::kContrastive: return "contrastive";
    case LossKind::kTriplet: return "triplet";
  }
  return "unknown";
}

LossKind loss_kind_from_string(const std::string& name) {
  if (name == "softmax") return LossKind::kSoftmax;
  if (name == "contrastive") return LossKind::kContrastive;
  if (name == "triplet") return LossKind::kTriplet;
  throw ConfigError("unknown loss kind '" + name + "'");
}

void validate(const TrainConfig& config) {
  if (config.learning_rate <= 0.0 || config.beta1 < 0.0 || config.beta1 >= 1.0 ||
      config.beta2 < 0.0 || config.beta2 >= 1.0 || config.epsilon <= 0.0) {
    throw ConfigError("train: bad optimizer settings");
  }
  if (config.margin < 0.0) throw ConfigError("train: margin must be >= 0");
  if (config.epochs < 0 || config.batches_per_epoch < 1 || config.batch_size < 1) {
    throw ConfigError("train: bad schedule");
  }
}

namespace {

using Clock = std::chrono::steady_clock;

std::span<const double> emb_row(const std::vector<double>& emb, int row, int units) {
  return {emb.data() + static_cast<std::size_t>(row) * units, static_cast<std::size_t>(units)};
}

// grad += scale * (a - b), written into the row for `row`.
void add_scaled_diff(std::vector<double>& grad, int row, int units, double scale,
                     std::span<const double> a, std::span<const double> b) {
  double* g = grad.data() + static_cast<std::size_t>(row) * units;
  for (int k = 0; k < units; ++k) g[k] += scale * (a[static_cast<std::size_t>(k)] - b[static_cast<std::size_t>(k)]);
}

struct StepOutcome {
  double mean_loss = 0.0;
  Gradients grads;
};

StepOutcome triplet_step(ModelParams& params, const TrainData& data,
                         const TrainConfig& config, Rng& sampler_rng, Rng& dropout_rng) {
  const int units = params.config.units;
  const auto triplets = sample_triplet_batch(data, config.batch_size, sampler_rng);
  const int b = static_cast<int>(triplets.size());

  std::vector<std::size_t> ai, pi, ni;
  for (const auto& t : triplets) {
    ai.push_back(t.anchor);
    pi.push_back(t.positive);
    ni.push_back(t.negative);
  }
  // All branches run through the one shared params instance.
  auto fa = forward_train(params, make_batch(data.padded, ai), dropout_rng);
  auto fp = forward_train(params, make_batch(data.padded, pi), dropout_rng);
  auto fn = forward_train(params, make_batch(data.padded, ni), dropout_rng);

  std::vector<double> ga(fa.embeddings.size(), 0.0);
  std::vector<double> gp(fp.embeddings.size(), 0.0);
  std::vector<double> gn(fn.embeddings.size(), 0.0);
  double loss_sum = 0.0;
  const double inv_b = 1.0 / b;
  for (int i = 0; i < b; ++i) {
    const auto ea = emb_row(fa.embeddings, i, units);
    const auto ep = emb_row(fp.embeddings, i, units);
    const auto en = emb_row(fn.embeddings, i, units);
    const double d_ap = euclidean_distance(ea, ep);
    const double d_an = euclidean_distance(ea, en);
    const double loss = triplet_loss(d_ap, d_an, config.margin);
    loss_sum += loss;
    if (loss > 0.0) {
      // d/de of the squared distances; no division by the distance needed.
      add_scaled_diff(ga, i, units, 2.0 * inv_b, ea, ep);
      add_scaled_diff(ga, i, units, -2.0 * inv_b, ea, en);
      add_scaled_diff(gp, i, units, -2.0 * inv_b, ea, ep);
      add_scaled_diff(gn, i, units, 2.0 * inv_b, ea, en);
    }
  }

  StepOutcome outcome;
  outcome.mean_loss = loss_sum * inv_b;
  outcome.grads = backward(params, fa.cache, ga).grads;
  add_gradients(outcome.grads, backward(params, fp.cache, gp).grads);
  add_gradients(outcome.grads, backward(params, fn.cache, gn).grads);
  return outcome;
}

StepOutcome contrastive_step(ModelParams& params, const TrainData& data,
                             const TrainConfig& config, Rng& sampler_rng,
                             Rng& dropout_rng) {
  const int units = params.config.units;
  const auto pairs = sample_pair_batch(data, config.batch_size, sampler_rng);
  const int b = static_cast<int>(pairs.size());

  std::vector<std::size_t> left, right;
  for (const auto& p : pairs) {
    left.push_back(p.a);
    right.push_back(p.b);
  }
  auto fa = forward_train(params, make_batch(data.padded, left), dropout_rng);
  auto fb = forward_train(params, make_batch(data.padded, right), dropout_rng);

  std::vector<double> ga(fa.embeddings.size(), 0.0);
  std::vector<double> gb(fb.embeddings.size(), 0.0);
  double loss_sum = 0.0;
  const double inv_b = 1.0 / b;
  for (int i = 0; i < b; ++i) {
    const auto ea = emb_row(fa.embeddings, i, units);
    const auto eb = emb_row(fb.embeddings, i, units);
    const double d = euclidean_distance(ea, eb);
    double dloss_dd = 0.0;
    loss_sum += contrastive_loss(d, pairs[static_cast<std::size_t>(i)].label, config.margin, &dloss_dd);
    if (d > 1e-12 && dloss_dd != 0.0) {
      const double scale = dloss_dd / d * inv_b;
      add_scaled_diff(ga, i, units, scale, ea, eb);
      add_scaled_diff(gb, i, units, -scale, ea, eb);
    }
  }

  StepOutcome outcome;
  outcome.mean_loss = loss_sum * inv_b;
  outcome.grads = backward(params, fa.cache, ga).grads;
  add_gradients(outcome.grads, backward(params, fb.cache, gb).grads);
  return outcome;
}

StepOutcome softmax_step(ModelParams& params, const TrainData& data,
                         const std::vector<int>& class_of_sequence,
                         const TrainConfig& config, Rng& sampler_rng, Rng& dropout_rng) {
  const int units = params.config.units;
  const int classes = params.classifier->num_classes;
  std::vector<std::size_t> indices;
  indices.reserve(static_cast<std::size_t>(config.batch_size));
  for (int i = 0; i < config.batch_size; ++i) {
    indices.push_back(sampler_rng.below(data.padded.size()));
  }
  auto fwd = forward_train(params, make_batch(data.padded, indices), dropout_rng);
  const auto logits = classifier_logits(params, fwd.embeddings, config.batch_size);

  std::vector<double> grad_logits(logits.size(), 0.0);
  double loss_sum = 0.0;
  const double inv_b = 1.0 / config.batch_size;
  std::vector<double> row_grad;
  for (int i = 0; i < config.batch_size; ++i) {
    const std::span<const double> row{logits.data() + static_cast<std::size_t>(i) * classes,
                                      static_cast<std::size_t>(classes)};
    loss_sum += softmax_loss(row, class_of_sequence[indices[static_cast<std::size_t>(i)]], &row_grad);
    for (int c = 0; c < classes; ++c) {
      grad_logits[static_cast<std::size_t>(i) * classes + c] = row_grad[static_cast<std::size_t>(c)] * inv_b;
    }
  }

  StepOutcome outcome;
  outcome.grads = zero_gradients(params);
  const auto grad_emb =
      classifier_backward(params, fwd.embeddings, grad_logits, config.batch_size, outcome.grads);
  add_gradients(outcome.grads, backward(params, fwd.cache, grad_emb).grads);
  outcome.mean_loss = loss_sum * inv_b;
  return outcome;
}

}  // namespace

TrainResult train_continue(ModelParams params, AdamState adam, const Dataset& train_set,
                           const TrainConfig& config) {
  validate(config);
  validate(params.config);
  const TrainData data = prepare_train_data(train_set, params.config.max_seq_len);

  std::vector<int> class_of_sequence;
  if (config.loss_kind == LossKind::kSoftmax) {
    const int classes = static_cast<int>(data.subjects.size());
    if (classes < 2) {
      throw DataError("softmax training needs at least 2 subjects, got " +
                      std::to_string(classes));
    }
    if (!params.classifier) {
      attach_classifier(params, classes, config.seed);
      adam = make_adam_state(params);  // head adds moment slots
    } else if (params.classifier->num_classes != classes) {
      throw DataError("resumed classifier head expects " +
                      std::to_string(params.classifier->num_classes) + " classes, dataset has " +
                      std::to_string(classes));
    }
    class_of_sequence.resize(data.padded.size());
    for (std::size_t s = 0; s < data.by_subject.size(); ++s) {
      for (const std::size_t idx : data.by_subject[s]) {
        class_of_sequence[idx] = static_cast<int>(s);
      }
    }
  } else {
    if (data.subjects.size() < 2) {
      throw DataError("metric-loss training needs at least 2 subjects");
    }
  }

  Rng sampler_rng(derive_seed(config.seed, SeedPurpose::kSampler));
  Rng dropout_rng(derive_seed(config.seed, SeedPurpose::kDropout));
  const AdamConfig adam_config{config.learning_rate, config.beta1, config.beta2,
                               config.epsilon};

  TrainResult result;
  result.history.epochs.reserve(static_cast<std::size_t>(config.epochs));
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const auto start = Clock::now();
    double loss_sum = 0.0;
    for (int step = 0; step < config.batches_per_epoch; ++step) {
      StepOutcome outcome;
      switch (config.loss_kind) {
        case LossKind::kTriplet:
          outcome = triplet_step(params, data, config, sampler_rng, dropout_rng);
          break;
        case LossKind::kContrastive:
          outcome = contrastive_step(params, data, config, sampler_rng, dropout_rng);
          break;
        case LossKind::kSoftmax:
          outcome = softmax_step(params, data, class_of_sequence, config, sampler_rng,
                                 dropout_rng);
          break;
      }
      if (!std::isfinite(outcome.mean_loss)) {
        throw NumericError("training diverged: non-finite loss at epoch " +
                           std::to_string(epoch + 1) + ", step " + std::to_string(step + 1));
      }
      adam_step(params, outcome.grads, adam, adam_config);
      if (!all_finite(params)) {
        throw NumericError("training diverged: non-finite parameter at epoch " +
                           std::to_string(epoch + 1) + ", step " + std::to_string(step + 1));
      }
      loss_sum += outcome.mean_loss;
    }
    EpochStats stats;
    stats.mean_loss = loss_sum / config.batches_per_epoch;
    stats.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    result.history.epochs.push_back(stats);
  }

  result.params = std::move(params);
  result.adam = std::move(adam);
  return result;
}

TrainResult train(const Dataset& train_set, const ModelConfig& model_config,
                  const TrainConfig& train_config) {
  validate(train_config);
  ModelParams params = init_params(model_config, train_config.seed);
  AdamState adam = make_adam_state(params);
  return train_continue(std::move(params), std::move(adam), train_set, train_config);
}

}  // namespace kbio
