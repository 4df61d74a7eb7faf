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

#ifndef KBIO_CORE_NET_MODEL_HPP_
#define KBIO_CORE_NET_MODEL_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace kbio {

// Embedding network: masking, two LSTM layers, batch normalization and
// dropout between them. The output is layer 2's hidden state at the last
// valid timestep.
struct ModelConfig {
  int input_dim = 5;
  int units = 128;
  int num_layers = 2;  // the hand-derived gradients are specialized to 2
  int max_seq_len = 50;
  double dropout_rate = 0.5;
  double recurrent_dropout_rate = 0.2;
  double bn_momentum = 0.99;
  double bn_epsilon = 1e-3;
};

void validate(const ModelConfig& config);

// One LSTM layer. Gate order within the leading 4u axis is fixed:
// input, forget, cell, output.
struct LstmLayerParams {
  int units = 0;
  int in_dim = 0;
  std::vector<double> w;  // 4u x in_dim, row-major
  std::vector<double> u;  // 4u x units
  std::vector<double> b;  // 4u
};

struct BatchNormParams {
  std::vector<double> gamma;
  std::vector<double> beta;
  std::vector<double> running_mean;
  std::vector<double> running_var;
  std::int64_t update_count = 0;
};

// C-way classification head used only for softmax training.
struct ClassifierParams {
  int num_classes = 0;
  std::vector<double> w;  // C x units
  std::vector<double> b;  // C
};

struct ModelParams {
  ModelConfig config;
  LstmLayerParams layer1;
  BatchNormParams bn;
  LstmLayerParams layer2;
  std::optional<ClassifierParams> classifier;
};

// Glorot-uniform input weights, orthogonal recurrent weights, zero biases
// except forget-gate bias 1. Deterministic per seed.
ModelParams init_params(const ModelConfig& config, std::uint64_t seed);

void attach_classifier(ModelParams& params, int num_classes, std::uint64_t seed);

// Trainable parameter count: 4u(d+u+1) for layer 1, 2u for batch norm,
// 4u(2u+1) for layer 2, plus C(u+1) when a classifier head is attached.
// Returns 200,448 for the default configuration; a commonly quoted figure
// for this architecture is 200,458, and the extra 10 parameters do not
// correspond to any array in this implementation.
std::int64_t count_params(const ModelConfig& config, int num_classes = 0);

// Gradients mirror the trainable arrays of ModelParams.
struct Gradients {
  LstmLayerParams layer1;
  std::vector<double> bn_gamma;
  std::vector<double> bn_beta;
  LstmLayerParams layer2;
  std::optional<ClassifierParams> classifier;
};

Gradients zero_gradients(const ModelParams& params);
void add_gradients(Gradients& into, const Gradients& other);

// Fixed-order enumeration of the trainable arrays; the order is part of the
// checkpoint and optimizer-state contract.
struct ParamView {
  std::string name;
  double* data = nullptr;
  std::size_t size = 0;
};
std::vector<ParamView> trainable_arrays(ModelParams& params);
std::vector<ParamView> trainable_arrays(Gradients& grads);

std::size_t total_trainable(const ModelParams& params);
bool all_finite(const ModelParams& params);

}  // namespace kbio

#endif  // KBIO_CORE_NET_MODEL_HPP_
