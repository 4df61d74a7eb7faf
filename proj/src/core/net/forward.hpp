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

#ifndef KBIO_CORE_NET_FORWARD_HPP_
#define KBIO_CORE_NET_FORWARD_HPP_

#include <cstdint>
#include <vector>

#include "core/data/features.hpp"
#include "core/net/model.hpp"
#include "core/rng.hpp"

namespace kbio {

// A batch of fixed-length feature sequences: x is B x M x dim row-major,
// mask is B x M with the valid (leading) steps set.
struct Batch {
  int batch = 0;
  int steps = 0;
  int dim = 0;
  std::vector<double> x;
  std::vector<std::uint8_t> mask;
};

Batch make_batch(const std::vector<FeatureSequence>& padded,
                 const std::vector<std::size_t>& indices);
Batch make_batch(const std::vector<FeatureSequence>& padded);

// Everything backward() needs. Per-layer tensors are B x M x u row-major;
// states at masked steps hold the carried-through values.
struct LayerCache {
  std::vector<double> gi, gf, gg, go;  // gate activations
  std::vector<double> c;               // cell state after each step
  std::vector<double> h;               // hidden state after each step
  std::vector<double> rmask;           // B x u recurrent dropout scale
};

struct ForwardCache {
  Batch input;
  LayerCache l1, l2;
  std::vector<double> bn_xhat;     // normalized pre-scale activations
  std::vector<double> bn_inv_std;  // per channel
  std::vector<double> bn_mean;     // per channel
  double bn_count = 0.0;           // valid (b, t) pairs in the statistics
  std::vector<double> drop_mask;   // B x M x u inter-layer dropout scale
  std::vector<double> l2_input;    // post-BN, post-dropout
  std::vector<int> last_valid;     // per sequence
};

struct ForwardResult {
  std::vector<double> embeddings;  // B x units
  ForwardCache cache;
};

// Inference: dropout is identity, batch norm uses running statistics, and
// sequences do not interact, so embeddings are independent of padding target
// and of the rest of the batch.
std::vector<double> forward_infer(const ModelParams& params, const Batch& batch);

// Training: batch norm uses statistics over valid timesteps only (and
// updates the running ones); dropout masks are drawn from `dropout_rng`.
ForwardResult forward_train(ModelParams& params, const Batch& batch, Rng& dropout_rng);

struct BackwardResult {
  Gradients grads;
  std::vector<double> grad_input;  // B x M x dim; filled when requested
};

// Exact gradients of sum(grad_embeddings . embeddings) with respect to every
// trainable parameter. Masked timesteps contribute nothing.
BackwardResult backward(const ModelParams& params, const ForwardCache& cache,
                        const std::vector<double>& grad_embeddings,
                        bool want_grad_input = false);

// Classifier head (softmax training).
std::vector<double> classifier_logits(const ModelParams& params,
                                      const std::vector<double>& embeddings, int batch);
// Accumulates head gradients and returns grad wrt embeddings.
std::vector<double> classifier_backward(const ModelParams& params,
                                        const std::vector<double>& embeddings,
                                        const std::vector<double>& grad_logits,
                                        int batch, Gradients& grads);

// Batched inference over many sequences; order preserving.
std::vector<std::vector<double>> embed(const ModelParams& params,
                                       const std::vector<FeatureSequence>& padded,
                                       int chunk = 256);

// Number of worker threads for batch math; n <= 1 forces serial execution.
void set_num_threads(int n);
int num_threads();

}  // namespace kbio

#endif  // KBIO_CORE_NET_FORWARD_HPP_
