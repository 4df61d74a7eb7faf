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

#ifndef KBIO_CORE_EVAL_EER_HPP_
#define KBIO_CORE_EVAL_EER_HPP_

#include <vector>

namespace kbio {

// Scores are distances: lower means more genuine, and a query is accepted
// when its score falls below the threshold.
struct RocPoint {
  double threshold = 0.0;
  double far = 0.0;  // fraction of impostor scores accepted
  double frr = 0.0;  // fraction of genuine scores rejected
};

// Operating points swept over every distinct score plus a catch-all
// threshold above the maximum. FAR is non-decreasing and FRR non-increasing
// along the sweep.
std::vector<RocPoint> roc_points(std::vector<double> genuine, std::vector<double> impostor);

// Equal error rate in percent: sweep thresholds over the merged score set
// and interpolate linearly between the two thresholds bracketing the
// FAR = FRR crossing. The interpolation keeps the estimate stable for the
// small per-subject score sets used by the protocol without biasing it:
// chance-level scores average 50 regardless of how few scores there are.
// Perfectly separated scores give exactly 0 and identical score multisets
// give exactly 50.
double compute_eer(const std::vector<double>& genuine, const std::vector<double>& impostor);

}  // namespace kbio

#endif  // KBIO_CORE_EVAL_EER_HPP_
