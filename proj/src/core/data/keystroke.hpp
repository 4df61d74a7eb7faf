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

#ifndef KBIO_CORE_DATA_KEYSTROKE_HPP_
#define KBIO_CORE_DATA_KEYSTROKE_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace kbio {

// One key press/release pair. Times are integer milliseconds, either epoch
// or session-relative; only differences matter downstream.
struct KeystrokeEvent {
  int keycode = 0;  // 0..255
  std::int64_t press_ms = 0;
  std::int64_t release_ms = 0;

  friend bool operator==(const KeystrokeEvent&, const KeystrokeEvent&) = default;
};

// One typing session of one subject. Events are kept sorted by press time.
struct KeystrokeSequence {
  std::string subject_id;
  std::string session_id;
  std::vector<KeystrokeEvent> events;
  // Auxiliary metadata (e.g. "country") used for identification pre-screening.
  std::map<std::string, std::string> attributes;

  friend bool operator==(const KeystrokeSequence&, const KeystrokeSequence&) = default;
};

using Dataset = std::vector<KeystrokeSequence>;

// Subject ids in order of first appearance.
std::vector<std::string> subject_ids(const Dataset& dataset);

// Indices of each subject's sequences, keyed by subject id.
std::map<std::string, std::vector<std::size_t>> group_by_subject(const Dataset& dataset);

}  // namespace kbio

#endif  // KBIO_CORE_DATA_KEYSTROKE_HPP_
