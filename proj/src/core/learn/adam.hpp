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

#ifndef KBIO_CORE_LEARN_ADAM_HPP_
#define KBIO_CORE_LEARN_ADAM_HPP_

#include <cstdint>
#include <vector>

#include "core/net/model.hpp"

namespace kbio {

struct AdamConfig {
  double learning_rate = 0.05;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

// Moments are stored flat over the fixed trainable-array order.
struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  std::int64_t t = 0;
};

AdamState make_adam_state(const ModelParams& params);

// One bias-corrected update over a flat parameter block; `t` is the step
// number after incrementing (1 on the first call).
void adam_update_flat(double* params, const double* grads, double* m, double* v,
                      std::size_t count, std::int64_t t, const AdamConfig& config);

// Standard bias-corrected update over all trainable arrays; increments t.
void adam_step(ModelParams& params, Gradients& grads, AdamState& state,
               const AdamConfig& config);

}  // namespace kbio

#endif  // KBIO_CORE_LEARN_ADAM_HPP_
