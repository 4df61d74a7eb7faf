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

#ifndef KBIO_CORE_ANALYSIS_LEVENSHTEIN_HPP_
#define KBIO_CORE_ANALYSIS_LEVENSHTEIN_HPP_

#include <span>
#include <string_view>

namespace kbio {

// Minimum number of single-symbol insertions, deletions, and substitutions
// turning `a` into `b`. Dynamic programming over two rows.
int levenshtein(std::span<const int> a, std::span<const int> b);
int levenshtein(std::string_view a, std::string_view b);

}  // namespace kbio

#endif  // KBIO_CORE_ANALYSIS_LEVENSHTEIN_HPP_
