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

#include "core/net/model.hpp"

#include <cmath>

#include "core/common.hpp"
#include "core/rng.hpp"

namespace kbio {

namespace {

// Uniform in [-limit, limit] with limit = sqrt(6 / (fan_in + fan_out)).
// The fan counts follow the combined-kernel convention: fan_in is the input
// width, fan_out the full 4u gate axis.
void fill_glorot(Rng& rng, std::vector<double>& w, int fan_in, int fan_out) {
  const double limit = std::sqrt(6.0 / (fan_in + fan_out));
  for (auto& v : w) v = rng.uniform(-limit, limit);
}

// Semi-orthogonal matrix (columns orthonormal) via modified Gram-Schmidt on
// a Gaussian draw. rows >= cols required.
void fill_orthogonal(Rng& rng, std::vector<double>& m, int rows, int cols) {
  std::vector<double> a(m.size());
  for (auto& v : a) v = rng.gauss(0.0, 1.0);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < j; ++i) {
      double dot = 0.0;
      for (int r = 0; r < rows; ++r) dot += a[r * cols + i] * a[r * cols + j];
      for (int r = 0; r < rows; ++r) a[r * cols + j] -= dot * a[r * cols + i];
    }
    double norm = 0.0;
    for (int r = 0; r < rows; ++r) norm += a[r * cols + j] * a[r * cols + j];
    norm = std::sqrt(norm);
    if (norm < 1e-12) throw NumericError("orthogonal init: degenerate column");
    for (int r = 0; r < rows; ++r) a[r * cols + j] /= norm;
  }
  m = std::move(a);
}

LstmLayerParams init_layer(Rng& rng, int units, int in_dim) {
  LstmLayerParams layer;
  layer.units = units;
  layer.in_dim = in_dim;
  layer.w.resize(static_cast<std::size_t>(4 * units) * in_dim);
  layer.u.resize(static_cast<std::size_t>(4 * units) * units);
  layer.b.assign(static_cast<std::size_t>(4 * units), 0.0);
  fill_glorot(rng, layer.w, in_dim, 4 * units);
  fill_orthogonal(rng, layer.u, 4 * units, units);
  for (int j = units; j < 2 * units; ++j) layer.b[static_cast<std::size_t>(j)] = 1.0;
  return layer;
}

}  // namespace

void validate(const ModelConfig& config) {
  if (config.input_dim < 1) throw ConfigError("model: input_dim must be >= 1");
  if (config.units < 1) throw ConfigError("model: units must be >= 1");
  if (config.num_layers != 2) throw ConfigError("model: exactly 2 layers supported");
  if (config.max_seq_len < 1) throw ConfigError("model: max_seq_len must be >= 1");
  if (config.dropout_rate < 0.0 || config.dropout_rate >= 1.0 ||
      config.recurrent_dropout_rate < 0.0 || config.recurrent_dropout_rate >= 1.0) {
    throw ConfigError("model: dropout rates must lie in [0, 1)");
  }
  if (config.bn_momentum < 0.0 || config.bn_momentum >= 1.0 || config.bn_epsilon <= 0.0) {
    throw ConfigError("model: bad batch-norm settings");
  }
}

ModelParams init_params(const ModelConfig& config, std::uint64_t seed) {
  validate(config);
  Rng rng(derive_seed(seed, SeedPurpose::kInit));
  ModelParams params;
  params.config = config;
  params.layer1 = init_layer(rng, config.units, config.input_dim);
  params.layer2 = init_layer(rng, config.units, config.units);
  const auto u = static_cast<std::size_t>(config.units);
  params.bn.gamma.assign(u, 1.0);
  params.bn.beta.assign(u, 0.0);
  params.bn.running_mean.assign(u, 0.0);
  params.bn.running_var.assign(u, 1.0);
  return params;
}

void attach_classifier(ModelParams& params, int num_classes, std::uint64_t seed) {
  if (num_classes < 2) throw ConfigError("classifier: need at least 2 classes");
  Rng rng(derive_seed(seed, SeedPurpose::kInit, 0x1000));
  ClassifierParams cls;
  cls.num_classes = num_classes;
  cls.w.resize(static_cast<std::size_t>(num_classes) * params.config.units);
  cls.b.assign(static_cast<std::size_t>(num_classes), 0.0);
  fill_glorot(rng, cls.w, params.config.units, num_classes);
  params.classifier = std::move(cls);
}

std::int64_t count_params(const ModelConfig& config, int num_classes) {
  validate(config);
  if (num_classes < 0) throw ConfigError("count_params: negative class count");
  const std::int64_t u = config.units;
  const std::int64_t d = config.input_dim;
  std::int64_t total = 4 * u * (d + u + 1);  // layer 1
  total += 2 * u;                            // batch norm gamma/beta
  total += 4 * u * (2 * u + 1);              // layer 2
  if (num_classes > 0) total += static_cast<std::int64_t>(num_classes) * (u + 1);
  return total;
}

Gradients zero_gradients(const ModelParams& params) {
  Gradients g;
  auto zero_layer = [](const LstmLayerParams& layer) {
    LstmLayerParams z;
    z.units = layer.units;
    z.in_dim = layer.in_dim;
    z.w.assign(layer.w.size(), 0.0);
    z.u.assign(layer.u.size(), 0.0);
    z.b.assign(layer.b.size(), 0.0);
    return z;
  };
  g.layer1 = zero_layer(params.layer1);
  g.layer2 = zero_layer(params.layer2);
  g.bn_gamma.assign(params.bn.gamma.size(), 0.0);
  g.bn_beta.assign(params.bn.beta.size(), 0.0);
  if (params.classifier) {
    ClassifierParams c;
    c.num_classes = params.classifier->num_classes;
    c.w.assign(params.classifier->w.size(), 0.0);
    c.b.assign(params.classifier->b.size(), 0.0);
    g.classifier = std::move(c);
  }
  return g;
}

void add_gradients(Gradients& into, const Gradients& other) {
  auto axpy = [](std::vector<double>& a, const std::vector<double>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  };
  axpy(into.layer1.w, other.layer1.w);
  axpy(into.layer1.u, other.layer1.u);
  axpy(into.layer1.b, other.layer1.b);
  axpy(into.bn_gamma, other.bn_gamma);
  axpy(into.bn_beta, other.bn_beta);
  axpy(into.layer2.w, other.layer2.w);
  axpy(into.layer2.u, other.layer2.u);
  axpy(into.layer2.b, other.layer2.b);
  if (into.classifier && other.classifier) {
    axpy(into.classifier->w, other.classifier->w);
    axpy(into.classifier->b, other.classifier->b);
  }
}

namespace {

template <typename Layer1, typename Bn1, typename Bn2, typename Layer2, typename Cls>
std::vector<ParamView> make_views(Layer1& l1, Bn1& gamma, Bn2& beta, Layer2& l2, Cls* cls) {
  std::vector<ParamView> views = {
      {"layer1.w", l1.w.data(), l1.w.size()},
      {"layer1.u", l1.u.data(), l1.u.size()},
      {"layer1.b", l1.b.data(), l1.b.size()},
      {"bn.gamma", gamma.data(), gamma.size()},
      {"bn.beta", beta.data(), beta.size()},
      {"layer2.w", l2.w.data(), l2.w.size()},
      {"layer2.u", l2.u.data(), l2.u.size()},
      {"layer2.b", l2.b.data(), l2.b.size()},
  };
  if (cls) {
    views.push_back({"classifier.w", cls->w.data(), cls->w.size()});
    views.push_back({"classifier.b", cls->b.data(), cls->b.size()});
  }
  return views;
}

}  // namespace

std::vector<ParamView> trainable_arrays(ModelParams& params) {
  return make_views(params.layer1, params.bn.gamma, params.bn.beta, params.layer2,
                    params.classifier ? &*params.classifier : nullptr);
}

std::vector<ParamView> trainable_arrays(Gradients& grads) {
  return make_views(grads.layer1, grads.bn_gamma, grads.bn_beta, grads.layer2,
                    grads.classifier ? &*grads.classifier : nullptr);
}

std::size_t total_trainable(const ModelParams& params) {
  std::size_t total = 0;
  for (const auto& view : trainable_arrays(const_cast<ModelParams&>(params))) {
    total += view.size;
  }
  return total;
}

bool all_finite(const ModelParams& params) {
  for (const auto& view : trainable_arrays(const_cast<ModelParams&>(params))) {
    for (std::size_t i = 0; i < view.size; ++i) {
      if (!std::isfinite(view.data[i])) return false;
    }
  }
  return true;
}

}  // namespace kbio
