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

#ifndef KBIO_CORE_ANALYSIS_TEXT_DEPENDENCY_HPP_
#define KBIO_CORE_ANALYSIS_TEXT_DEPENDENCY_HPP_

#include <cstdint>
#include <vector>

#include "core/eval/auth.hpp"

namespace kbio {

// One comparison of the one-shot protocol: edit distance between the two
// keycode strings (truncated to the model length) against the embedding
// distance that scored the comparison.
struct TextScorePair {
  int lev = 0;
  double embed_distance = 0.0;
  bool genuine = false;
};

struct CorrelationReport {
  int sequence_len = 0;
  int num_subjects = 0;
  std::uint64_t seed = 0;
  int sample_count = 0;
  double pearson_all = 0.0;       // pooled genuine + impostor
  double pearson_genuine = 0.0;   // NaN when undefined
  double pearson_impostor = 0.0;  // NaN when undefined
  double slope = 0.0;             // OLS of embedding distance on edit distance
  double intercept = 0.0;
  std::vector<TextScorePair> pairs;
  std::vector<TextScorePair> scatter;  // one genuine + one impostor per subject
};

// Measures how strongly embedding distances track the typed text: runs the
// one-shot (G = 1) comparisons, records (edit distance, embedding distance)
// per comparison, and fits Pearson/OLS over the pooled pairs. An embedding
// that only reflects typing dynamics shows |pearson_all| near 0; one that
// reflects the text shows a strong correlation.
CorrelationReport text_dependency_report(const BatchEmbedder& embedder,
                                         const Dataset& test_set, int sequence_len,
                                         int num_subjects, std::uint64_t seed);

}  // namespace kbio

#endif  // KBIO_CORE_ANALYSIS_TEXT_DEPENDENCY_HPP_
