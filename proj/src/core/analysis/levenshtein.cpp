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

#include "core/analysis/levenshtein.hpp"

#include <algorithm>
#include <vector>

namespace kbio {

int levenshtein(std::span<const int> a, std::span<const int> b) {
  if (a.size() < b.size()) std::swap(a, b);  // keep the rows short
  const std::size_t n = b.size();
  std::vector<int> prev(n + 1);
  std::vector<int> curr(n + 1);
  for (std::size_t j = 0; j <= n; ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    curr[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= n; ++j) {
      const int substitute = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      curr[j] = std::min({prev[j] + 1, curr[j - 1] + 1, substitute});
    }
    std::swap(prev, curr);
  }
  return prev[n];
}

int levenshtein(std::string_view a, std::string_view b) {
  std::vector<int> av(a.begin(), a.end());
  std::vector<int> bv(b.begin(), b.end());
  return levenshtein(std::span<const int>(av), std::span<const int>(bv));
}

}  // namespace kbio
