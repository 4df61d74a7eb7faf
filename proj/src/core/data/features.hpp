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

#ifndef KBIO_CORE_DATA_FEATURES_HPP_
#define KBIO_CORE_DATA_FEATURES_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "core/data/keystroke.hpp"

namespace kbio {

inline constexpr int kFeatureDim = 5;

// Per-keystroke timing features, in seconds, plus the normalized keycode.
//   hl: press -> release of the same key (hold latency)
//   il: previous release -> press (inter-key latency; negative under rollover)
//   pl: previous press -> press (press latency)
//   rl: previous release -> release (release latency)
// The first keystroke of a sequence has il = pl = rl = 0 since no previous
// key exists; this keeps one frame per keystroke.
struct FeatureFrame {
  double hl = 0.0;
  double il = 0.0;
  double pl = 0.0;
  double rl = 0.0;
  double key_norm = 0.0;  // keycode / 255
};

// Feature time series for one sequence. `frames` always holds the N valid
// frames; after pad_or_truncate, `matrix` (row-major M x 5) and `mask` hold
// the fixed-length view the network consumes. Rows with mask false are zero.
struct FeatureSequence {
  std::string subject_id;
  std::string session_id;
  std::vector<FeatureFrame> frames;
  std::vector<double> matrix;
  std::vector<std::uint8_t> mask;
  int padded_len = 0;  // M; 0 until pad_or_truncate

  int valid_len() const { return static_cast<int>(frames.size()); }
};

// Requires at least 2 events (no inter-key features exist otherwise).
FeatureSequence extract_features(const KeystrokeSequence& seq);

// Fixed-length view: first M frames kept when N > M, zero rows with mask
// false appended when N < M.
FeatureSequence pad_or_truncate(const FeatureSequence& fs, int target_len);

std::vector<FeatureSequence> extract_all(const Dataset& dataset, int target_len);

}  // namespace kbio

#endif  // KBIO_CORE_DATA_FEATURES_HPP_
