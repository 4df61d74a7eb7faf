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

#ifndef KBIO_CORE_LEARN_LOSSES_HPP_
#define KBIO_CORE_LEARN_LOSSES_HPP_

#include <span>
#include <vector>

namespace kbio {

double euclidean_distance(std::span<const double> e1, std::span<const double> e2);

// Cross-entropy of the softmax distribution, computed with max subtraction.
// When grad_logits is non-null it receives softmax(logits) - onehot(target).
double softmax_loss(std::span<const double> logits, int true_class,
                    std::vector<double>* grad_logits = nullptr);

// (1-L) d^2/2 + L max{0, alpha-d}^2 / 2, label 0 = genuine, 1 = impostor.
double contrastive_loss(double distance, int label, double alpha,
                        double* dloss_ddistance = nullptr);

// max{0, d_ap^2 - d_an^2 + alpha} on squared Euclidean distances.
double triplet_loss(double d_ap, double d_an, double alpha,
                    double* dloss_dd_ap = nullptr, double* dloss_dd_an = nullptr);

}  // namespace kbio

#endif  // KBIO_CORE_LEARN_LOSSES_HPP_
