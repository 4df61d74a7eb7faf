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

#include "core/learn/losses.hpp"

#include <algorithm>
#include <cmath>

#include "core/common.hpp"

namespace kbio {

double euclidean_distance(std::span<const double> e1, std::span<const double> e2) {
  if (e1.size() != e2.size()) {
    throw ConfigError("euclidean_distance: dimension mismatch " +
                      std::to_string(e1.size()) + " vs " + std::to_string(e2.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < e1.size(); ++i) {
    const double d = e1[i] - e2[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

double softmax_loss(std::span<const double> logits, int true_class,
                    std::vector<double>* grad_logits) {
  const int classes = static_cast<int>(logits.size());
  if (classes < 2) throw ConfigError("softmax_loss: need at least 2 classes");
  if (true_class < 0 || true_class >= classes) {
    throw ConfigError("softmax_loss: class index " + std::to_string(true_class) +
                      " out of range");
  }
  const double max_logit = *std::max_element(logits.begin(), logits.end());
  double denom = 0.0;
  for (const double z : logits) denom += std::exp(z - max_logit);
  const double log_denom = std::log(denom);
  const double loss = -(logits[static_cast<std::size_t>(true_class)] - max_logit - log_denom);
  if (grad_logits != nullptr) {
    grad_logits->resize(logits.size());
    for (int c = 0; c < classes; ++c) {
      (*grad_logits)[static_cast<std::size_t>(c)] =
          std::exp(logits[static_cast<std::size_t>(c)] - max_logit) / denom;
    }
    (*grad_logits)[static_cast<std::size_t>(true_class)] -= 1.0;
  }
  return loss;
}

double contrastive_loss(double distance, int label, double alpha,
                        double* dloss_ddistance) {
  if (distance < 0.0) throw ConfigError("contrastive_loss: negative distance");
  if (alpha < 0.0) throw ConfigError("contrastive_loss: negative margin");
  if (label != 0 && label != 1) throw ConfigError("contrastive_loss: label must be 0 or 1");
  if (label == 0) {
    if (dloss_ddistance != nullptr) *dloss_ddistance = distance;
    return 0.5 * distance * distance;
  }
  const double gap = alpha - distance;
  if (gap <= 0.0) {
    if (dloss_ddistance != nullptr) *dloss_ddistance = 0.0;
    return 0.0;
  }
  if (dloss_ddistance != nullptr) *dloss_ddistance = -gap;
  return 0.5 * gap * gap;
}

double triplet_loss(double d_ap, double d_an, double alpha, double* dloss_dd_ap,
                    double* dloss_dd_an) {
  if (d_ap < 0.0 || d_an < 0.0) throw ConfigError("triplet_loss: negative distance");
  const double value = d_ap * d_ap - d_an * d_an + alpha;
  if (value <= 0.0) {
    if (dloss_dd_ap != nullptr) *dloss_dd_ap = 0.0;
    if (dloss_dd_an != nullptr) *dloss_dd_an = 0.0;
    return 0.0;
  }
  if (dloss_dd_ap != nullptr) *dloss_dd_ap = 2.0 * d_ap;
  if (dloss_dd_an != nullptr) *dloss_dd_an = -2.0 * d_an;
  return value;
}

}  // namespace kbio
