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

#ifndef KBIO_CORE_DATA_LOG_IO_HPP_
#define KBIO_CORE_DATA_LOG_IO_HPP_

#include <iosfwd>
#include <string>

#include "core/data/keystroke.hpp"

namespace kbio {

// Keystroke log format, one event per line:
//
//   subject_id,session_id,keycode,press_ms,release_ms
//
// preceded by exactly that header line. '#' starts a comment; the directive
// form `#!attr,<subject_id>,<key>,<value>` attaches a metadata attribute to a
// subject. Events are grouped by (subject, session) in order of first
// appearance and sorted by press time within a session; exact duplicate
// events are dropped. Sequences with fewer than 2 events are dropped and
// counted in `dropped_short`.
struct ParseResult {
  Dataset dataset;
  int dropped_short = 0;
  int duplicate_events = 0;
};

ParseResult parse_log(std::istream& in);
ParseResult parse_log_string(const std::string& text);
ParseResult load_dataset(const std::string& path);

void serialize_log(const Dataset& dataset, std::ostream& out);
std::string serialize_log_string(const Dataset& dataset);
void save_dataset(const Dataset& dataset, const std::string& path);

}  // namespace kbio

#endif  // KBIO_CORE_DATA_LOG_IO_HPP_
