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

#include "core/data/log_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>
#include <utility>

#include "core/common.hpp"

namespace kbio {

namespace {

constexpr const char* kHeader = "subject_id,session_id,keycode,press_ms,release_ms";
constexpr const char* kAttrPrefix = "#!attr,";

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

std::int64_t parse_int(const std::string& s, int line_no, const char* what) {
  std::int64_t value = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || s.empty()) {
    throw DataError("line " + std::to_string(line_no) + ": bad " + what + " '" + s + "'");
  }
  return value;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

void check_id(const std::string& id, const char* what) {
  if (id.empty() || id.find(',') != std::string::npos ||
      id.find('\n') != std::string::npos) {
    throw DataError(std::string("invalid ") + what + " '" + id + "'");
  }
}

}  // namespace

ParseResult parse_log(std::istream& in) {
  ParseResult result;
  std::map<std::pair<std::string, std::string>, std::size_t> index;
  std::map<std::string, std::map<std::string, std::string>> attrs;

  std::string raw;
  int line_no = 0;
  bool saw_header = false;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind(kAttrPrefix, 0) == 0) {
        const auto fields = split_fields(line.substr(std::string(kAttrPrefix).size()));
        if (fields.size() != 3) {
          throw DataError("line " + std::to_string(line_no) + ": bad attribute directive");
        }
        attrs[fields[0]][fields[1]] = fields[2];
      }
      continue;
    }
    if (!saw_header) {
      if (line != kHeader) {
        throw DataError("line " + std::to_string(line_no) +
                        ": expected header '" + kHeader + "'");
      }
      saw_header = true;
      continue;
    }

    const auto fields = split_fields(line);
    if (fields.size() != 5) {
      throw DataError("line " + std::to_string(line_no) + ": expected 5 fields, got " +
                      std::to_string(fields.size()));
    }
    KeystrokeEvent event;
    const std::int64_t keycode = parse_int(fields[2], line_no, "keycode");
    if (keycode < 0 || keycode > 255) {
      throw DataError("line " + std::to_string(line_no) + ": keycode " +
                      std::to_string(keycode) + " outside 0..255");
    }
    event.keycode = static_cast<int>(keycode);
    event.press_ms = parse_int(fields[3], line_no, "press_ms");
    event.release_ms = parse_int(fields[4], line_no, "release_ms");
    if (event.release_ms < event.press_ms) {
      throw DataError("line " + std::to_string(line_no) + ": release_ms " +
                      std::to_string(event.release_ms) + " precedes press_ms " +
                      std::to_string(event.press_ms));
    }
    if (fields[0].empty() || fields[1].empty()) {
      throw DataError("line " + std::to_string(line_no) + ": empty subject or session id");
    }

    const auto key = std::make_pair(fields[0], fields[1]);
    auto it = index.find(key);
    if (it == index.end()) {
      KeystrokeSequence seq;
      seq.subject_id = fields[0];
      seq.session_id = fields[1];
      index.emplace(key, result.dataset.size());
      result.dataset.push_back(std::move(seq));
      it = index.find(key);
    }
    result.dataset[it->second].events.push_back(event);
  }
  // Uncontrolled acquisition can deliver events out of order; sort by press
  // time and drop exact duplicates.
  for (auto& seq : result.dataset) {
    std::sort(seq.events.begin(), seq.events.end(),
              [](const KeystrokeEvent& a, const KeystrokeEvent& b) {
                return std::tie(a.press_ms, a.release_ms, a.keycode) <
                       std::tie(b.press_ms, b.release_ms, b.keycode);
              });
    auto last = std::unique(seq.events.begin(), seq.events.end());
    result.duplicate_events += static_cast<int>(seq.events.end() - last);
    seq.events.erase(last, seq.events.end());
  }

  Dataset kept;
  kept.reserve(result.dataset.size());
  for (auto& seq : result.dataset) {
    if (seq.events.size() < 2) {
      ++result.dropped_short;
      continue;
    }
    auto attr_it = attrs.find(seq.subject_id);
    if (attr_it != attrs.end()) seq.attributes = attr_it->second;
    kept.push_back(std::move(seq));
  }
  result.dataset = std::move(kept);
  return result;
}

ParseResult parse_log_string(const std::string& text) {
  std::istringstream in(text);
  return parse_log(in);
}

ParseResult load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open dataset file '" + path + "'");
  return parse_log(in);
}

void serialize_log(const Dataset& dataset, std::ostream& out) {
  out << "# kbio keystroke log\n" << kHeader << "\n";
  std::vector<std::string> seen;
  for (const auto& seq : dataset) {
    check_id(seq.subject_id, "subject id");
    check_id(seq.session_id, "session id");
    if (seq.attributes.empty()) continue;
    if (std::find(seen.begin(), seen.end(), seq.subject_id) != seen.end()) continue;
    seen.push_back(seq.subject_id);
    for (const auto& [key, value] : seq.attributes) {
      out << kAttrPrefix << seq.subject_id << ',' << key << ',' << value << "\n";
    }
  }
  for (const auto& seq : dataset) {
    for (const auto& e : seq.events) {
      out << seq.subject_id << ',' << seq.session_id << ',' << e.keycode << ','
          << e.press_ms << ',' << e.release_ms << "\n";
    }
  }
}

std::string serialize_log_string(const Dataset& dataset) {
  std::ostringstream out;
  serialize_log(dataset, out);
  return out.str();
}

void save_dataset(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write dataset file '" + path + "'");
  serialize_log(dataset, out);
  if (!out) throw DataError("write to '" + path + "' failed");
}

}  // namespace kbio
