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

#include "core/data/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "core/common.hpp"
#include "core/rng.hpp"

namespace kbio {

namespace {

constexpr std::array<const char*, 40> kWords = {
    "the",   "quick", "brown",  "fox",    "jumps",  "over",   "lazy",
    "dog",   "pack",  "my",     "box",    "with",   "five",   "dozen",
    "jugs",  "how",   "vexing", "daft",   "zebras", "jump",   "waltz",
    "bad",   "nymph", "for",    "quartz", "sphinx", "of",     "black",
    "judge", "vow",   "time",   "and",    "tide",   "wait",   "none",
    "every", "good",  "boy",    "does",   "fine"};

constexpr std::array<const char*, 5> kCountries = {"AR", "BR", "CA", "DE", "ES"};

constexpr int kSpaceKey = 32;
constexpr int kAlphabetKeys = 27;  // 'a'..'z' plus space

// Upper- and lowercase keycodes share the physical key and its hold offset.
int key_slot(int keycode) {
  if (keycode == kSpaceKey) return 26;
  if (keycode >= 'A' && keycode <= 'Z') return keycode - 'A';
  return keycode - 'a';
}

double truncated_gauss(Rng& rng, double mean, double sd, double floor_s) {
  return std::max(floor_s, rng.gauss(mean, sd));
}

// Fixed population-wide per-key style patterns: centered over the alphabet
// and scaled to unit rms, so a pattern-weighted timing average over typical
// text is (nearly) zero and the style never shows up in session means.
std::array<double, kAlphabetKeys> make_style_pattern(std::uint64_t tag) {
  std::array<double, kAlphabetKeys> pattern{};
  Rng rng(derive_seed(0x6b62696f /* population constant, not the user seed */,
                      SeedPurpose::kSynth, tag));
  for (auto& v : pattern) v = rng.uniform(-1.0, 1.0);
  double mean = 0.0;
  for (const double v : pattern) mean += v;
  mean /= pattern.size();
  double rms = 0.0;
  for (auto& v : pattern) {
    v -= mean;
    rms += v * v;
  }
  rms = std::sqrt(rms / pattern.size());
  for (auto& v : pattern) v /= rms;
  return pattern;
}

const std::array<double, kAlphabetKeys>& hold_style_pattern() {
  static const auto pattern = make_style_pattern(101);
  return pattern;
}

const std::array<double, kAlphabetKeys>& gap_style_pattern() {
  static const auto pattern = make_style_pattern(202);
  return pattern;
}

std::string padded_number(int value, int width) {
  std::string digits = std::to_string(value);
  while (static_cast<int>(digits.size()) < width) digits.insert(digits.begin(), '0');
  return digits;
}

}  // namespace

void validate(const SynthConfig& cfg) {
  if (cfg.num_subjects < 1 || cfg.sessions_per_subject < 1 || cfg.mean_sentence_len < 1) {
    throw ConfigError("synth: subject, session, and length counts must be >= 1");
  }
  if (cfg.hold_mean <= 0.0 || cfg.gap_mean <= 0.0) {
    throw ConfigError("synth: timing means must be > 0");
  }
  if (cfg.hold_between_sd < 0.0 || cfg.hold_session_sd < 0.0 ||
      cfg.hold_within_sd < 0.0 || cfg.gap_between_sd < 0.0 ||
      cfg.gap_session_sd < 0.0 || cfg.gap_within_sd < 0.0 || cfg.key_offset_sd < 0.0) {
    throw ConfigError("synth: spreads must be >= 0");
  }
  if (cfg.case_flip_prob < 0.0 || cfg.case_flip_prob > 1.0) {
    throw ConfigError("synth: case flip probability must lie in [0, 1]");
  }
}

Dataset generate_synthetic(const SynthConfig& cfg) {
  validate(cfg);
  const int subject_width =
      std::max(4, static_cast<int>(std::to_string(cfg.num_subjects).size()));
  const int session_width =
      std::max(2, static_cast<int>(std::to_string(cfg.sessions_per_subject).size()));

  Dataset dataset;
  dataset.reserve(static_cast<std::size_t>(cfg.num_subjects) * cfg.sessions_per_subject);

  for (int s = 0; s < cfg.num_subjects; ++s) {
    Rng rng(derive_seed(cfg.seed, SeedPurpose::kSynth, static_cast<std::uint64_t>(s)));

    // Latent profile, drawn once per subject.
    const double mean_hold = truncated_gauss(rng, cfg.hold_mean, cfg.hold_between_sd, 0.015);
    const double mean_gap = truncated_gauss(rng, cfg.gap_mean, cfg.gap_between_sd, 0.005);
    const double hold_style = rng.gauss(0.0, cfg.hold_style_sd);
    const double gap_style = rng.gauss(0.0, cfg.gap_style_sd);
    std::array<double, kAlphabetKeys> hold_offset{};
    for (int k = 0; k < kAlphabetKeys; ++k) {
      hold_offset[static_cast<std::size_t>(k)] =
          rng.gauss(0.0, cfg.key_offset_sd) + hold_style * hold_style_pattern()[static_cast<std::size_t>(k)];
    }
    std::array<double, kAlphabetKeys> gap_offset{};
    for (int k = 0; k < kAlphabetKeys; ++k) {
      gap_offset[static_cast<std::size_t>(k)] =
          gap_style * gap_style_pattern()[static_cast<std::size_t>(k)];
    }
    const std::string country = kCountries[rng.below(kCountries.size())];

    const std::string subject = "s" + padded_number(s + 1, subject_width);
    for (int q = 0; q < cfg.sessions_per_subject; ++q) {
      KeystrokeSequence seq;
      seq.subject_id = subject;
      seq.session_id = subject + "-" + padded_number(q + 1, session_width);
      seq.attributes["country"] = country;

      // Day-to-day pace: shifts every timing of this session.
      const double session_hold = mean_hold + rng.gauss(0.0, cfg.hold_session_sd);
      const double session_gap = mean_gap + rng.gauss(0.0, cfg.gap_session_sd);
      const bool uppercase = rng.uniform01() < cfg.case_flip_prob;

      const int target_len = std::max(
          2, static_cast<int>(std::lround(
                 rng.gauss(cfg.mean_sentence_len, cfg.mean_sentence_len / 8.0))));
      std::string text;
      while (static_cast<int>(text.size()) < target_len) {
        if (!text.empty()) text.push_back(static_cast<char>(kSpaceKey));
        text += kWords[rng.below(kWords.size())];
      }

      std::int64_t t_ms = 0;
      seq.events.reserve(text.size());
      for (char c : text) {
        int keycode = static_cast<unsigned char>(c);
        if (uppercase && keycode != kSpaceKey) keycode -= 'a' - 'A';
        const auto slot = static_cast<std::size_t>(key_slot(keycode));
        if (!seq.events.empty()) {
          const double gap = truncated_gauss(rng, session_gap + gap_offset[slot],
                                             cfg.gap_within_sd, 0.001);
          t_ms = seq.events.back().release_ms + std::max<std::int64_t>(1, std::llround(gap * 1000.0));
        }
        const double hold = truncated_gauss(rng, session_hold + hold_offset[slot],
                                            cfg.hold_within_sd, 0.001);
        KeystrokeEvent e;
        e.keycode = keycode;
        e.press_ms = t_ms;
        e.release_ms = t_ms + std::max<std::int64_t>(1, std::llround(hold * 1000.0));
        seq.events.push_back(e);
      }
      dataset.push_back(std::move(seq));
    }
  }
  return dataset;
}

}  // namespace kbio
