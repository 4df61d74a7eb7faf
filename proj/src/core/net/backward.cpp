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

// Backpropagation through time for the two-layer architecture. Derivatives
// follow directly from the forward recurrences:
//   z = b + W x_t + U (r o h_{t-1})
//   i,f,o = sigmoid(z_i,z_f,z_o), g = tanh(z_g)
//   c_t = f o c_{t-1} + i o g,  h_t = o o tanh(c_t)
// Masked steps carry state through unchanged, so their gradients pass
// through unchanged as well and their input rows receive exact zeros.

#include <cmath>

#include "core/common.hpp"
#include "core/net/forward.hpp"
#include "core/net/gemm.hpp"

#ifdef KBIO_HAVE_OPENMP
#include <omp.h>
#endif

namespace kbio {

namespace {

// One LSTM layer backward. `d_y` holds upstream gradients on every h_t
// (B x M x u); `d_x` (optional) receives gradients on the layer inputs.
void layer_backward(const LstmLayerParams& layer, const LayerCache& lc,
                    const double* input, const std::uint8_t* mask, int batch, int steps,
                    const std::vector<double>& d_y, LstmLayerParams& grad, double* d_x) {
  const int units = layer.units;
  const int in_dim = layer.in_dim;
  const std::size_t bu = static_cast<std::size_t>(batch) * units;

  std::vector<double> dh_carry(bu, 0.0);
  std::vector<double> dc_carry(bu, 0.0);
  std::vector<double> dz(static_cast<std::size_t>(batch) * 4 * units);
  std::vector<double> xslice(static_cast<std::size_t>(batch) * in_dim);
  std::vector<double> r_prev(bu);
  std::vector<double> dh_rec(bu);
  std::vector<double> dx_slice(static_cast<std::size_t>(batch) * in_dim);

  for (int t = steps - 1; t >= 0; --t) {
#ifdef KBIO_HAVE_OPENMP
#pragma omp parallel for schedule(static) num_threads(detail::resolve_threads())
#endif
    for (int b = 0; b < batch; ++b) {
      const bool valid = mask[static_cast<std::size_t>(b) * steps + t] != 0;
      double* dzb = dz.data() + static_cast<std::size_t>(b) * 4 * units;
      if (!valid) {
        for (int j = 0; j < 4 * units; ++j) dzb[j] = 0.0;
        continue;
      }
      const std::size_t off =
          (static_cast<std::size_t>(b) * steps + static_cast<std::size_t>(t)) * units;
      const std::size_t prev_off = off - static_cast<std::size_t>(units);
      const std::size_t state_off = static_cast<std::size_t>(b) * units;
      for (int k = 0; k < units; ++k) {
        const double dh = d_y[off + k] + dh_carry[state_off + k];
        const double gi = lc.gi[off + k];
        const double gf = lc.gf[off + k];
        const double gg = lc.gg[off + k];
        const double go = lc.go[off + k];
        const double tc = std::tanh(lc.c[off + k]);
        const double dc = dc_carry[state_off + k] + dh * go * (1.0 - tc * tc);
        const double c_prev = (t > 0) ? lc.c[prev_off + k] : 0.0;
        dzb[k] = dc * gg * gi * (1.0 - gi);
        dzb[units + k] = dc * c_prev * gf * (1.0 - gf);
        dzb[2 * units + k] = dc * gi * (1.0 - gg * gg);
        dzb[3 * units + k] = dh * tc * go * (1.0 - go);
        dc_carry[state_off + k] = dc * gf;
      }
    }

    // Parameter gradients for this step.
    for (int b = 0; b < batch; ++b) {
      const double* src = input +
          (static_cast<std::size_t>(b) * steps + static_cast<std::size_t>(t)) * in_dim;
      for (int k = 0; k < in_dim; ++k) {
        xslice[static_cast<std::size_t>(b) * in_dim + k] = src[k];
      }
      const std::size_t state_off = static_cast<std::size_t>(b) * units;
      for (int k = 0; k < units; ++k) {
        const double h_prev =
            (t > 0) ? lc.h[(static_cast<std::size_t>(b) * steps + static_cast<std::size_t>(t - 1)) * units + k]
                    : 0.0;
        const double rm = lc.rmask.empty() ? 1.0 : lc.rmask[state_off + k];
        r_prev[state_off + k] = h_prev * rm;
      }
    }
    detail::acc_outer(dz.data(), xslice.data(), batch, 4 * units, in_dim, grad.w.data());
    detail::acc_outer(dz.data(), r_prev.data(), batch, 4 * units, units, grad.u.data());
    for (int b = 0; b < batch; ++b) {
      const double* dzb = dz.data() + static_cast<std::size_t>(b) * 4 * units;
      for (int j = 0; j < 4 * units; ++j) grad.b[static_cast<std::size_t>(j)] += dzb[j];
    }

    if (d_x != nullptr) {
      detail::mul_d_a(dz.data(), batch, 4 * units, layer.w.data(), in_dim, dx_slice.data());
      for (int b = 0; b < batch; ++b) {
        double* dst = d_x +
            (static_cast<std::size_t>(b) * steps + static_cast<std::size_t>(t)) * in_dim;
        const double* src = dx_slice.data() + static_cast<std::size_t>(b) * in_dim;
        for (int k = 0; k < in_dim; ++k) dst[k] = src[k];
      }
    }

    detail::mul_d_a(dz.data(), batch, 4 * units, layer.u.data(), units, dh_rec.data());
    for (int b = 0; b < batch; ++b) {
      if (!mask[static_cast<std::size_t>(b) * steps + t]) continue;  // carry persists
      const std::size_t state_off = static_cast<std::size_t>(b) * units;
      for (int k = 0; k < units; ++k) {
        const double rm = lc.rmask.empty() ? 1.0 : lc.rmask[state_off + k];
        dh_carry[state_off + k] = dh_rec[state_off + k] * rm;
      }
    }
  }
}

}  // namespace

BackwardResult backward(const ModelParams& params, const ForwardCache& cache,
                        const std::vector<double>& grad_embeddings, bool want_grad_input) {
  const Batch& batch = cache.input;
  const int units = params.config.units;
  const int steps = batch.steps;
  const int nbatch = batch.batch;
  const std::size_t bmu = static_cast<std::size_t>(nbatch) * steps * units;
  if (grad_embeddings.size() != static_cast<std::size_t>(nbatch) * units) {
    throw ConfigError("backward: grad_embeddings size mismatch");
  }
  if (cache.l1.h.size() != bmu || cache.l2.h.size() != bmu) {
    throw ConfigError("backward: cache does not match params/batch");
  }

  BackwardResult result;
  result.grads = zero_gradients(params);

  // Upstream gradient enters layer 2 at each sequence's last valid step.
  std::vector<double> d_y2(bmu, 0.0);
  for (int b = 0; b < nbatch; ++b) {
    const std::size_t off =
        (static_cast<std::size_t>(b) * steps +
         static_cast<std::size_t>(cache.last_valid[static_cast<std::size_t>(b)])) * units;
    for (int k = 0; k < units; ++k) {
      d_y2[off + k] = grad_embeddings[static_cast<std::size_t>(b) * units + k];
    }
  }

  std::vector<double> d_l2_input(bmu, 0.0);
  layer_backward(params.layer2, cache.l2, cache.l2_input.data(), batch.mask.data(),
                 nbatch, steps, d_y2, result.grads.layer2, d_l2_input.data());

  // Dropout, then batch norm. Statistics were computed over the valid steps,
  // so every valid element couples to the per-channel sums.
  std::vector<double> d_xhat(bmu, 0.0);
  std::vector<double> s1(static_cast<std::size_t>(units), 0.0);
  std::vector<double> s2(static_cast<std::size_t>(units), 0.0);
  for (int b = 0; b < nbatch; ++b) {
    for (int t = 0; t < steps; ++t) {
      if (!batch.mask[static_cast<std::size_t>(b) * steps + t]) continue;
      const std::size_t off = (static_cast<std::size_t>(b) * steps + static_cast<std::size_t>(t)) * units;
      for (int k = 0; k < units; ++k) {
        const double d_bnout = d_l2_input[off + k] * cache.drop_mask[off + k];
        result.grads.bn_gamma[static_cast<std::size_t>(k)] += d_bnout * cache.bn_xhat[off + k];
        result.grads.bn_beta[static_cast<std::size_t>(k)] += d_bnout;
        const double dxh = d_bnout * params.bn.gamma[static_cast<std::size_t>(k)];
        d_xhat[off + k] = dxh;
        s1[static_cast<std::size_t>(k)] += dxh;
        s2[static_cast<std::size_t>(k)] += dxh * cache.bn_xhat[off + k];
      }
    }
  }
  const double count = cache.bn_count;
  std::vector<double> d_y1(bmu, 0.0);
  for (int b = 0; b < nbatch; ++b) {
    for (int t = 0; t < steps; ++t) {
      if (!batch.mask[static_cast<std::size_t>(b) * steps + t]) continue;
      const std::size_t off = (static_cast<std::size_t>(b) * steps + static_cast<std::size_t>(t)) * units;
      for (int k = 0; k < units; ++k) {
        d_y1[off + k] = cache.bn_inv_std[static_cast<std::size_t>(k)] *
                        (d_xhat[off + k] -
                         (s1[static_cast<std::size_t>(k)] +
                          cache.bn_xhat[off + k] * s2[static_cast<std::size_t>(k)]) / count);
      }
    }
  }

  double* grad_input_ptr = nullptr;
  if (want_grad_input) {
    result.grad_input.assign(static_cast<std::size_t>(nbatch) * steps * batch.dim, 0.0);
    grad_input_ptr = result.grad_input.data();
  }
  layer_backward(params.layer1, cache.l1, batch.x.data(), batch.mask.data(), nbatch,
                 steps, d_y1, result.grads.layer1, grad_input_ptr);
  return result;
}

}  // namespace kbio
