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

#ifndef KBIO_CORE_ANALYSIS_STATS_HPP_
#define KBIO_CORE_ANALYSIS_STATS_HPP_

#include <span>

namespace kbio {

// Sample Pearson correlation. Both inputs need length >= 2 and at least one
// non-constant series; constant input is an explicit error, not a silent 0.
double pearson(std::span<const double> x, std::span<const double> y);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Ordinary least squares of y on x.
LinearFit linear_regression(std::span<const double> x, std::span<const double> y);

}  // namespace kbio

#endif  // KBIO_CORE_ANALYSIS_STATS_HPP_
