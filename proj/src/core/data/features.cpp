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

#include "core/data/features.hpp"

#include <algorithm>

#include "core/common.hpp"

namespace kbio {

std::vector<std::string> subject_ids(const Dataset& dataset) {
  std::vector<std::string> ids;
  for (const auto& seq : dataset) {
    if (std::find(ids.begin(), ids.end(), seq.subject_id) == ids.end()) {
      ids.push_back(seq.subject_id);
    }
  }
  return ids;
}

std::map<std::string, std::vector<std::size_t>> group_by_subject(const Dataset& dataset) {
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    groups[dataset[i].subject_id].push_back(i);
  }
  return groups;
}

FeatureSequence extract_features(const KeystrokeSequence& seq) {
  const std::size_t n = seq.events.size();
  if (n < 2) {
    throw DataError("extract_features: sequence '" + seq.subject_id + "/" +
                    seq.session_id + "' has fewer than 2 events");
  }
  FeatureSequence out;
  out.subject_id = seq.subject_id;
  out.session_id = seq.session_id;
  out.frames.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& e = seq.events[k];
    FeatureFrame& f = out.frames[k];
    f.hl = static_cast<double>(e.release_ms - e.press_ms) / 1000.0;
    f.key_norm = static_cast<double>(e.keycode) / 255.0;
    if (k > 0) {
      const auto& p = seq.events[k - 1];
      f.il = static_cast<double>(e.press_ms - p.release_ms) / 1000.0;
      f.pl = static_cast<double>(e.press_ms - p.press_ms) / 1000.0;
      f.rl = static_cast<double>(e.release_ms - p.release_ms) / 1000.0;
    }
  }
  return out;
}

FeatureSequence pad_or_truncate(const FeatureSequence& fs, int target_len) {
  if (target_len < 1) throw ConfigError("pad_or_truncate: target length must be >= 1");
  FeatureSequence out = fs;
  const int m = target_len;
  const int n = fs.valid_len();
  const int valid = std::min(n, m);
  out.padded_len = m;
  out.matrix.assign(static_cast<std::size_t>(m) * kFeatureDim, 0.0);
  out.mask.assign(static_cast<std::size_t>(m), 0);
  for (int t = 0; t < valid; ++t) {
    const FeatureFrame& f = fs.frames[static_cast<std::size_t>(t)];
    double* row = out.matrix.data() + static_cast<std::size_t>(t) * kFeatureDim;
    row[0] = f.hl;
    row[1] = f.il;
    row[2] = f.pl;
    row[3] = f.rl;
    row[4] = f.key_norm;
    out.mask[static_cast<std::size_t>(t)] = 1;
  }
  return out;
}

std::vector<FeatureSequence> extract_all(const Dataset& dataset, int target_len) {
  std::vector<FeatureSequence> out;
  out.reserve(dataset.size());
  for (const auto& seq : dataset) {
    out.push_back(pad_or_truncate(extract_features(seq), target_len));
  }
  return out;
}

}  // namespace kbio
