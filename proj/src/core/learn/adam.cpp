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

#include "core/learn/adam.hpp"

#include <cmath>

#include "core/common.hpp"

namespace kbio {

AdamState make_adam_state(const ModelParams& params) {
  AdamState state;
  const std::size_t total = total_trainable(params);
  state.m.assign(total, 0.0);
  state.v.assign(total, 0.0);
  return state;
}

void adam_step(ModelParams& params, Gradients& grads, AdamState& state,
               const AdamConfig& config) {
  const auto param_views = trainable_arrays(params);
  const auto grad_views = trainable_arrays(grads);
  if (param_views.size() != grad_views.size()) {
    throw ConfigError("adam_step: gradient structure mismatch");
  }
  std::size_t total = 0;
  for (std::size_t i = 0; i < param_views.size(); ++i) {
    if (param_views[i].size != grad_views[i].size) {
      throw ConfigError("adam_step: shape mismatch for " + param_views[i].name);
    }
    total += param_views[i].size;
  }
  if (state.m.size() != total || state.v.size() != total) {
    throw ConfigError("adam_step: optimizer state size mismatch");
  }

  state.t += 1;
  std::size_t offset = 0;
  for (std::size_t i = 0; i < param_views.size(); ++i) {
    adam_update_flat(param_views[i].data, grad_views[i].data, state.m.data() + offset,
                     state.v.data() + offset, param_views[i].size, state.t, config);
    offset += param_views[i].size;
  }
}

void adam_update_flat(double* params, const double* grads, double* m, double* v,
                      std::size_t count, std::int64_t t, const AdamConfig& config) {
  const double bias1 = 1.0 - std::pow(config.beta1, static_cast<double>(t));
  const double bias2 = 1.0 - std::pow(config.beta2, static_cast<double>(t));
  for (std::size_t k = 0; k < count; ++k) {
    m[k] = config.beta1 * m[k] + (1.0 - config.beta1) * grads[k];
    v[k] = config.beta2 * v[k] + (1.0 - config.beta2) * grads[k] * grads[k];
    const double m_hat = m[k] / bias1;
    const double v_hat = v[k] / bias2;
    params[k] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
  }
}

}  // namespace kbio
