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

#include "core/data/split.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "core/common.hpp"
#include "core/rng.hpp"

namespace kbio {

std::pair<Dataset, Dataset> split_subjects(const Dataset& dataset,
                                           double train_fraction,
                                           std::uint64_t seed) {
  if (train_fraction < 0.0 || train_fraction > 1.0) {
    throw ConfigError("split_subjects: train fraction must be in [0, 1]");
  }
  std::vector<std::string> ids = subject_ids(dataset);
  if (ids.size() < 2) {
    throw DataError("split_subjects: need at least 2 subjects, got " +
                    std::to_string(ids.size()));
  }
  std::sort(ids.begin(), ids.end());
  Rng rng(derive_seed(seed, SeedPurpose::kSplit));
  rng.shuffle(ids);

  const auto train_count = static_cast<std::size_t>(
      std::lround(train_fraction * static_cast<double>(ids.size())));
  std::set<std::string> train_ids(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(train_count));

  std::pair<Dataset, Dataset> out;
  for (const auto& seq : dataset) {
    (train_ids.count(seq.subject_id) ? out.first : out.second).push_back(seq);
  }
  return out;
}

}  // namespace kbio
