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

#ifndef KBIO_CORE_DATA_SPLIT_HPP_
#define KBIO_CORE_DATA_SPLIT_HPP_

#include <cstdint>
#include <utility>

#include "core/data/keystroke.hpp"

namespace kbio {

// Disjoint subject-level partition: no subject appears on both sides.
// Deterministic for a fixed seed. Requires at least 2 subjects.
std::pair<Dataset, Dataset> split_subjects(const Dataset& dataset,
                                           double train_fraction,
                                           std::uint64_t seed);

}  // namespace kbio

#endif  // KBIO_CORE_DATA_SPLIT_HPP_
