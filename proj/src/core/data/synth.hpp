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

#ifndef KBIO_CORE_DATA_SYNTH_HPP_
#define KBIO_CORE_DATA_SYNTH_HPP_

#include <cstdint>

#include "core/data/keystroke.hpp"

namespace kbio {

// Synthetic-subject generator. Each subject gets a latent typing profile
// drawn once: a mean hold time and inter-key gap, per-key hold offsets, and
// key-conditioned style scales. Each session then draws a day-to-day pace
// shift and an uppercase/lowercase text mode, and samples timings around the
// shifted profile. Population defaults give roughly 5 keys per second. All
// timings are Gaussian, truncated at 1 ms.
struct SynthConfig {
  int num_subjects = 1;
  int sessions_per_subject = 15;
  int mean_sentence_len = 70;  // keystrokes per session, approximately

  double hold_mean = 0.085;        // population mean hold time, seconds
  double hold_between_sd = 0.021;  // spread of per-subject mean hold
  double hold_session_sd = 0.009;  // per-session pace shift on holds
  double hold_within_sd = 0.012;   // per-keystroke spread within a session
  double gap_mean = 0.110;         // population mean release->press gap
  double gap_between_sd = 0.035;
  double gap_session_sd = 0.014;
  double gap_within_sd = 0.030;
  double key_offset_sd = 0.012;    // per-subject per-key hold offsets

  // Key-conditioned style: every subject speeds up some keys and slows down
  // others along a fixed population-wide per-key pattern, scaled by a
  // per-subject coefficient. The pattern is centered, so session averages
  // carry almost none of it; recovering it requires keycode-conditioned
  // timing features.
  double hold_style_sd = 0.028;  // per-subject hold pattern scale
  double gap_style_sd = 0.040;   // per-subject gap pattern scale

  // Probability that a session is typed in uppercase keycodes. Same physical
  // keys and timing profile, but the keycode input channel shifts for the
  // whole session, so embeddings that depend on the text scatter widely.
  double case_flip_prob = 0.5;

  std::uint64_t seed = 1;
};

void validate(const SynthConfig& cfg);

// Deterministic for a fixed config: per-subject streams are derived from the
// seed, so output does not depend on evaluation order.
Dataset generate_synthetic(const SynthConfig& cfg);

}  // namespace kbio

#endif  // KBIO_CORE_DATA_SYNTH_HPP_
