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

#include "core/net/forward.hpp"

#include <algorithm>
#include <cmath>

#include "core/common.hpp"
#include "core/net/gemm.hpp"

#ifdef KBIO_HAVE_OPENMP
#include <omp.h>
#endif

namespace kbio {

namespace {

int g_threads = 0;  // 0 = library default

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

void set_num_threads(int n) { g_threads = n; }

int num_threads() { return g_threads; }

namespace detail {

int resolve_threads() {
#ifdef KBIO_HAVE_OPENMP
  if (g_threads > 0) return g_threads;
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void add_x_at(const double* x, int batch, int cols, const double* a, int rows, double* z) {
#ifdef KBIO_HAVE_OPENMP
#pragma omp parallel for schedule(static) num_threads(resolve_threads())
#endif
  for (int b = 0; b < batch; ++b) {
    const double* xb = x + static_cast<std::size_t>(b) * cols;
    double* zb = z + static_cast<std::size_t>(b) * rows;
    for (int j = 0; j < rows; ++j) {
      const double* aj = a + static_cast<std::size_t>(j) * cols;
      double acc = 0.0;
      for (int k = 0; k < cols; ++k) acc += xb[k] * aj[k];
      zb[j] += acc;
    }
  }
}

void mul_d_a(const double* d, int batch, int rows, const double* a, int cols, double* z) {
#ifdef KBIO_HAVE_OPENMP
#pragma omp parallel for schedule(static) num_threads(resolve_threads())
#endif
  for (int b = 0; b < batch; ++b) {
    const double* db = d + static_cast<std::size_t>(b) * rows;
    double* zb = z + static_cast<std::size_t>(b) * cols;
    for (int k = 0; k < cols; ++k) zb[k] = 0.0;
    for (int j = 0; j < rows; ++j) {
      const double dj = db[j];
      if (dj == 0.0) continue;
      const double* aj = a + static_cast<std::size_t>(j) * cols;
      for (int k = 0; k < cols; ++k) zb[k] += dj * aj[k];
    }
  }
}

void acc_outer(const double* d, const double* x, int batch, int rows, int cols, double* da) {
#ifdef KBIO_HAVE_OPENMP
#pragma omp parallel for schedule(static) num_threads(resolve_threads())
#endif
  for (int j = 0; j < rows; ++j) {
    double* daj = da + static_cast<std::size_t>(j) * cols;
    for (int b = 0; b < batch; ++b) {
      const double dj = d[static_cast<std::size_t>(b) * rows + j];
      if (dj == 0.0) continue;
      const double* xb = x + static_cast<std::size_t>(b) * cols;
      for (int k = 0; k < cols; ++k) daj[k] += dj * xb[k];
    }
  }
}

}  // namespace detail

Batch make_batch(const std::vector<FeatureSequence>& padded,
                 const std::vector<std::size_t>& indices) {
  Batch batch;
  if (indices.empty()) return batch;
  const FeatureSequence& first = padded[indices.front()];
  if (first.padded_len <= 0) throw ConfigError("make_batch: sequences must be padded");
  batch.batch = static_cast<int>(indices.size());
  batch.steps = first.padded_len;
  batch.dim = kFeatureDim;
  batch.x.resize(static_cast<std::size_t>(batch.batch) * batch.steps * batch.dim);
  batch.mask.resize(static_cast<std::size_t>(batch.batch) * batch.steps);
  for (std::size_t row = 0; row < indices.size(); ++row) {
    const FeatureSequence& fs = padded[indices[row]];
    if (fs.padded_len != batch.steps) {
      throw ConfigError("make_batch: mixed padded lengths in one batch");
    }
    std::copy(fs.matrix.begin(), fs.matrix.end(),
              batch.x.begin() + static_cast<std::ptrdiff_t>(row * fs.matrix.size()));
    std::copy(fs.mask.begin(), fs.mask.end(),
              batch.mask.begin() + static_cast<std::ptrdiff_t>(row * fs.mask.size()));
  }
  return batch;
}

Batch make_batch(const std::vector<FeatureSequence>& padded) {
  std::vector<std::size_t> indices(padded.size());
  for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
  return make_batch(padded, indices);
}

namespace {

struct LayerRun {
  const LstmLayerParams* layer = nullptr;
  const double* rmask = nullptr;  // B x u, null = no recurrent dropout
};

// One LSTM layer over the whole batch. `input` is B x M x in_dim; `mask`
// gates the state updates: masked steps carry h and c through unchanged.
// Writes gate activations and states into `cache` when provided.
void run_lstm(const LayerRun& run, const double* input, const std::uint8_t* mask,
              int batch, int steps, LayerCache* cache, std::vector<double>& h_out) {
  const LstmLayerParams& layer = *run.layer;
  const int units = layer.units;
  const int in_dim = layer.in_dim;
  const std::size_t bu = static_cast<std::size_t>(batch) * units;

  std::vector<double> h(bu, 0.0);
  std::vector<double> c(bu, 0.0);
  std::vector<double> r(bu, 0.0);
  std::vector<double> z(static_cast<std::size_t>(batch) * 4 * units);
  std::vector<double> xslice(static_cast<std::size_t>(batch) * in_dim);
  h_out.assign(static_cast<std::size_t>(batch) * steps * units, 0.0);

  for (int t = 0; t < steps; ++t) {
    // z = b + x_t W^T + r U^T
    for (int b = 0; b < batch; ++b) {
      double* zb = z.data() + static_cast<std::size_t>(b) * 4 * units;
      for (int j = 0; j < 4 * units; ++j) zb[j] = layer.b[static_cast<std::size_t>(j)];
    }
    // input rows are strided by steps*in_dim per sequence; gather the slice
    // at t so the kernels see contiguous rows.
    for (int b = 0; b < batch; ++b) {
      const double* src = input +
          (static_cast<std::size_t>(b) * steps + static_cast<std::size_t>(t)) * in_dim;
      std::copy(src, src + in_dim, xslice.begin() + static_cast<std::ptrdiff_t>(b) * in_dim);
    }
    detail::add_x_at(xslice.data(), batch, in_dim, layer.w.data(), 4 * units, z.data());

    if (run.rmask != nullptr) {
      for (std::size_t i = 0; i < bu; ++i) r[i] = h[i] * run.rmask[i];
      detail::add_x_at(r.data(), batch, units, layer.u.data(), 4 * units, z.data());
    } else {
      detail::add_x_at(h.data(), batch, units, layer.u.data(), 4 * units, z.data());
    }

#ifdef KBIO_HAVE_OPENMP
#pragma omp parallel for schedule(static) num_threads(detail::resolve_threads())
#endif
    for (int b = 0; b < batch; ++b) {
      const std::size_t state_off = static_cast<std::size_t>(b) * units;
      const std::size_t step_off =
          (static_cast<std::size_t>(b) * steps + static_cast<std::size_t>(t)) * units;
      const bool valid = mask[static_cast<std::size_t>(b) * steps + t] != 0;
      const double* zb = z.data() + static_cast<std::size_t>(b) * 4 * units;
      for (int k = 0; k < units; ++k) {
        if (valid) {
          const double gi = sigmoid(zb[k]);
          const double gf = sigmoid(zb[units + k]);
          const double gg = std::tanh(zb[2 * units + k]);
          const double go = sigmoid(zb[3 * units + k]);
          const double cn = gf * c[state_off + k] + gi * gg;
          const double hn = go * std::tanh(cn);
          c[state_off + k] = cn;
          h[state_off + k] = hn;
          if (cache != nullptr) {
            cache->gi[step_off + k] = gi;
            cache->gf[step_off + k] = gf;
            cache->gg[step_off + k] = gg;
            cache->go[step_off + k] = go;
          }
        }
        if (cache != nullptr) cache->c[step_off + k] = c[state_off + k];
        h_out[step_off + k] = h[state_off + k];
      }
    }
  }
  if (cache != nullptr) cache->h = h_out;
}

void alloc_layer_cache(LayerCache& cache, std::size_t bmu) {
  cache.gi.assign(bmu, 0.0);
  cache.gf.assign(bmu, 0.0);
  cache.gg.assign(bmu, 0.0);
  cache.go.assign(bmu, 0.0);
  cache.c.assign(bmu, 0.0);
}

std::vector<int> last_valid_steps(const Batch& batch) {
  std::vector<int> last(static_cast<std::size_t>(batch.batch), -1);
  for (int b = 0; b < batch.batch; ++b) {
    int n = 0;
    for (int t = 0; t < batch.steps; ++t) {
      if (batch.mask[static_cast<std::size_t>(b) * batch.steps + t]) ++n;
    }
    if (n == 0) {
      throw DataError("forward: sequence " + std::to_string(b) + " has an empty mask");
    }
    last[static_cast<std::size_t>(b)] = n - 1;
  }
  return last;
}

void check_batch(const ModelParams& params, const Batch& batch) {
  if (batch.batch <= 0 || batch.steps <= 0) throw ConfigError("forward: empty batch");
  if (batch.dim != params.config.input_dim) {
    throw ConfigError("forward: batch dim " + std::to_string(batch.dim) +
                      " != model input_dim " + std::to_string(params.config.input_dim));
  }
  if (batch.x.size() != static_cast<std::size_t>(batch.batch) * batch.steps * batch.dim ||
      batch.mask.size() != static_cast<std::size_t>(batch.batch) * batch.steps) {
    throw ConfigError("forward: batch buffer sizes inconsistent");
  }
}

std::vector<double> gather_embeddings(const std::vector<double>& h2,
                                      const std::vector<int>& last_valid, int batch,
                                      int steps, int units) {
  std::vector<double> emb(static_cast<std::size_t>(batch) * units);
  for (int b = 0; b < batch; ++b) {
    const std::size_t off =
        (static_cast<std::size_t>(b) * steps + static_cast<std::size_t>(last_valid[static_cast<std::size_t>(b)])) *
        units;
    std::copy(h2.begin() + static_cast<std::ptrdiff_t>(off),
              h2.begin() + static_cast<std::ptrdiff_t>(off + units),
              emb.begin() + static_cast<std::ptrdiff_t>(b) * units);
  }
  return emb;
}

}  // namespace

std::vector<double> forward_infer(const ModelParams& params, const Batch& batch) {
  check_batch(params, batch);
  const int units = params.config.units;
  const auto last_valid = last_valid_steps(batch);

  std::vector<double> h1;
  run_lstm({&params.layer1, nullptr}, batch.x.data(), batch.mask.data(), batch.batch,
           batch.steps, nullptr, h1);

  // Batch norm with running statistics; each element independent.
  const double eps = params.config.bn_epsilon;
  std::vector<double> normed(h1.size(), 0.0);
  for (int b = 0; b < batch.batch; ++b) {
    for (int t = 0; t < batch.steps; ++t) {
      if (!batch.mask[static_cast<std::size_t>(b) * batch.steps + t]) continue;
      const std::size_t off =
          (static_cast<std::size_t>(b) * batch.steps + static_cast<std::size_t>(t)) * units;
      for (int k = 0; k < units; ++k) {
        const double inv = 1.0 / std::sqrt(params.bn.running_var[static_cast<std::size_t>(k)] + eps);
        normed[off + k] = params.bn.gamma[static_cast<std::size_t>(k)] *
                              (h1[off + k] - params.bn.running_mean[static_cast<std::size_t>(k)]) * inv +
                          params.bn.beta[static_cast<std::size_t>(k)];
      }
    }
  }

  std::vector<double> h2;
  run_lstm({&params.layer2, nullptr}, normed.data(), batch.mask.data(), batch.batch,
           batch.steps, nullptr, h2);
  return gather_embeddings(h2, last_valid, batch.batch, batch.steps, units);
}

ForwardResult forward_train(ModelParams& params, const Batch& batch, Rng& dropout_rng) {
  check_batch(params, batch);
  const int units = params.config.units;
  const int steps = batch.steps;
  const int nbatch = batch.batch;
  const std::size_t bmu = static_cast<std::size_t>(nbatch) * steps * units;
  const std::size_t bu = static_cast<std::size_t>(nbatch) * units;

  ForwardResult result;
  ForwardCache& cache = result.cache;
  cache.input = batch;
  cache.last_valid = last_valid_steps(batch);
  alloc_layer_cache(cache.l1, bmu);
  alloc_layer_cache(cache.l2, bmu);

  // All dropout masks are drawn up front in a fixed order, one stream per
  // batch, so the trajectory is a pure function of the rng state.
  const double r_rate = params.config.recurrent_dropout_rate;
  auto draw_rmask = [&](std::vector<double>& m) {
    m.assign(bu, 1.0);
    if (r_rate <= 0.0) return;
    const double keep = 1.0 - r_rate;
    for (auto& v : m) v = dropout_rng.uniform01() >= r_rate ? 1.0 / keep : 0.0;
  };
  draw_rmask(cache.l1.rmask);
  draw_rmask(cache.l2.rmask);

  const double d_rate = params.config.dropout_rate;
  cache.drop_mask.assign(bmu, 0.0);
  const double keep = 1.0 - d_rate;
  for (int b = 0; b < nbatch; ++b) {
    for (int t = 0; t < steps; ++t) {
      if (!batch.mask[static_cast<std::size_t>(b) * steps + t]) continue;
      const std::size_t off = (static_cast<std::size_t>(b) * steps + static_cast<std::size_t>(t)) * units;
      for (int k = 0; k < units; ++k) {
        if (d_rate <= 0.0) {
          cache.drop_mask[off + k] = 1.0;
        } else {
          cache.drop_mask[off + k] = dropout_rng.uniform01() >= d_rate ? 1.0 / keep : 0.0;
        }
      }
    }
  }

  std::vector<double> h1;
  run_lstm({&params.layer1, cache.l1.rmask.data()}, batch.x.data(), batch.mask.data(),
           nbatch, steps, &cache.l1, h1);

  // Batch statistics over valid timesteps only; padded steps would bias the
  // channel means toward the carried-through states.
  double count = 0.0;
  cache.bn_mean.assign(static_cast<std::size_t>(units), 0.0);
  std::vector<double> var(static_cast<std::size_t>(units), 0.0);
  for (int b = 0; b < nbatch; ++b) {
    for (int t = 0; t < steps; ++t) {
      if (!batch.mask[static_cast<std::size_t>(b) * steps + t]) continue;
      count += 1.0;
      const std::size_t off = (static_cast<std::size_t>(b) * steps + static_cast<std::size_t>(t)) * units;
      for (int k = 0; k < units; ++k) cache.bn_mean[static_cast<std::size_t>(k)] += h1[off + k];
    }
  }
  for (auto& m : cache.bn_mean) m /= count;
  for (int b = 0; b < nbatch; ++b) {
    for (int t = 0; t < steps; ++t) {
      if (!batch.mask[static_cast<std::size_t>(b) * steps + t]) continue;
      const std::size_t off = (static_cast<std::size_t>(b) * steps + static_cast<std::size_t>(t)) * units;
      for (int k = 0; k < units; ++k) {
        const double d = h1[off + k] - cache.bn_mean[static_cast<std::size_t>(k)];
        var[static_cast<std::size_t>(k)] += d * d;
      }
    }
  }
  for (auto& v : var) v /= count;
  cache.bn_count = count;

  const double eps = params.config.bn_epsilon;
  cache.bn_inv_std.resize(static_cast<std::size_t>(units));
  for (int k = 0; k < units; ++k) {
    cache.bn_inv_std[static_cast<std::size_t>(k)] = 1.0 / std::sqrt(var[static_cast<std::size_t>(k)] + eps);
  }

  const double momentum = params.config.bn_momentum;
  for (int k = 0; k < units; ++k) {
    params.bn.running_mean[static_cast<std::size_t>(k)] =
        momentum * params.bn.running_mean[static_cast<std::size_t>(k)] +
        (1.0 - momentum) * cache.bn_mean[static_cast<std::size_t>(k)];
    params.bn.running_var[static_cast<std::size_t>(k)] =
        momentum * params.bn.running_var[static_cast<std::size_t>(k)] +
        (1.0 - momentum) * var[static_cast<std::size_t>(k)];
  }
  params.bn.update_count += 1;

  cache.bn_xhat.assign(bmu, 0.0);
  cache.l2_input.assign(bmu, 0.0);
  for (int b = 0; b < nbatch; ++b) {
    for (int t = 0; t < steps; ++t) {
      if (!batch.mask[static_cast<std::size_t>(b) * steps + t]) continue;
      const std::size_t off = (static_cast<std::size_t>(b) * steps + static_cast<std::size_t>(t)) * units;
      for (int k = 0; k < units; ++k) {
        const double xhat = (h1[off + k] - cache.bn_mean[static_cast<std::size_t>(k)]) *
                            cache.bn_inv_std[static_cast<std::size_t>(k)];
        cache.bn_xhat[off + k] = xhat;
        const double y = params.bn.gamma[static_cast<std::size_t>(k)] * xhat +
                         params.bn.beta[static_cast<std::size_t>(k)];
        cache.l2_input[off + k] = y * cache.drop_mask[off + k];
      }
    }
  }

  std::vector<double> h2;
  run_lstm({&params.layer2, cache.l2.rmask.data()}, cache.l2_input.data(),
           batch.mask.data(), nbatch, steps, &cache.l2, h2);

  result.embeddings = gather_embeddings(h2, cache.last_valid, nbatch, steps, units);
  return result;
}

std::vector<double> classifier_logits(const ModelParams& params,
                                      const std::vector<double>& embeddings, int batch) {
  if (!params.classifier) throw ConfigError("classifier_logits: no classifier head");
  const int units = params.config.units;
  const int classes = params.classifier->num_classes;
  std::vector<double> logits(static_cast<std::size_t>(batch) * classes);
  for (int b = 0; b < batch; ++b) {
    for (int cls = 0; cls < classes; ++cls) {
      logits[static_cast<std::size_t>(b) * classes + cls] = params.classifier->b[static_cast<std::size_t>(cls)];
    }
  }
  detail::add_x_at(embeddings.data(), batch, units, params.classifier->w.data(), classes,
                   logits.data());
  return logits;
}

std::vector<double> classifier_backward(const ModelParams& params,
                                        const std::vector<double>& embeddings,
                                        const std::vector<double>& grad_logits,
                                        int batch, Gradients& grads) {
  if (!params.classifier || !grads.classifier) {
    throw ConfigError("classifier_backward: no classifier head");
  }
  const int units = params.config.units;
  const int classes = params.classifier->num_classes;
  detail::acc_outer(grad_logits.data(), embeddings.data(), batch, classes, units,
                    grads.classifier->w.data());
  for (int b = 0; b < batch; ++b) {
    for (int cls = 0; cls < classes; ++cls) {
      grads.classifier->b[static_cast<std::size_t>(cls)] +=
          grad_logits[static_cast<std::size_t>(b) * classes + cls];
    }
  }
  std::vector<double> grad_emb(static_cast<std::size_t>(batch) * units, 0.0);
  detail::mul_d_a(grad_logits.data(), batch, classes, params.classifier->w.data(), units,
                  grad_emb.data());
  return grad_emb;
}

std::vector<std::vector<double>> embed(const ModelParams& params,
                                       const std::vector<FeatureSequence>& padded,
                                       int chunk) {
  if (chunk < 1) chunk = 1;
  const int units = params.config.units;
  std::vector<std::vector<double>> out;
  out.reserve(padded.size());
  for (std::size_t start = 0; start < padded.size(); start += static_cast<std::size_t>(chunk)) {
    const std::size_t end = std::min(padded.size(), start + static_cast<std::size_t>(chunk));
    std::vector<std::size_t> indices;
    indices.reserve(end - start);
    for (std::size_t i = start; i < end; ++i) indices.push_back(i);
    const Batch batch = make_batch(padded, indices);
    const std::vector<double> emb = forward_infer(params, batch);
    for (std::size_t i = 0; i < indices.size(); ++i) {
      out.emplace_back(emb.begin() + static_cast<std::ptrdiff_t>(i * units),
                       emb.begin() + static_cast<std::ptrdiff_t>((i + 1) * units));
    }
  }
  return out;
}

}  // namespace kbio
