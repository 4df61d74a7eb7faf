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

#ifndef KBIO_CORE_NET_CHECKPOINT_HPP_
#define KBIO_CORE_NET_CHECKPOINT_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include "core/learn/adam.hpp"
#include "core/net/model.hpp"

namespace kbio {

// Versioned, field-tagged binary container: config, every parameter array
// with explicit shape, batch-norm running statistics, optional optimizer
// state, and the training seed. Loading validates every shape against the
// stored config and fails loudly on any mismatch.
struct Checkpoint {
  ModelParams params;
  std::optional<AdamState> adam;
  std::uint64_t training_seed = 0;
};

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace kbio

#endif  // KBIO_CORE_NET_CHECKPOINT_HPP_
