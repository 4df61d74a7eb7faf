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

#include "core/eval/eer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/common.hpp"

namespace kbio {

std::vector<RocPoint> roc_points(std::vector<double> genuine, std::vector<double> impostor) {
  if (genuine.empty() || impostor.empty()) {
    throw DataError("roc_points: need both genuine and impostor scores");
  }
  for (const double s : genuine) {
    if (!std::isfinite(s)) throw DataError("roc_points: non-finite genuine score");
  }
  for (const double s : impostor) {
    if (!std::isfinite(s)) throw DataError("roc_points: non-finite impostor score");
  }
  std::sort(genuine.begin(), genuine.end());
  std::sort(impostor.begin(), impostor.end());

  std::vector<double> thresholds;
  thresholds.reserve(genuine.size() + impostor.size() + 1);
  thresholds.insert(thresholds.end(), genuine.begin(), genuine.end());
  thresholds.insert(thresholds.end(), impostor.begin(), impostor.end());
  std::sort(thresholds.begin(), thresholds.end());
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  const double ng = static_cast<double>(genuine.size());
  const double ni = static_cast<double>(impostor.size());
  std::vector<RocPoint> points;
  points.reserve(thresholds.size() + 1);
  for (const double t : thresholds) {
    RocPoint p;
    p.threshold = t;
    // accepted: score < t
    p.far = static_cast<double>(std::lower_bound(impostor.begin(), impostor.end(), t) -
                                impostor.begin()) / ni;
    p.frr = static_cast<double>(genuine.end() -
                                std::lower_bound(genuine.begin(), genuine.end(), t)) / ng;
    points.push_back(p);
  }
  // Accept-everything endpoint just past the largest score.
  RocPoint top;
  top.threshold = std::nextafter(thresholds.back(), std::numeric_limits<double>::infinity());
  top.far = 1.0;
  top.frr = 0.0;
  points.push_back(top);
  return points;
}

double compute_eer(const std::vector<double>& genuine, const std::vector<double>& impostor) {
  const auto points = roc_points(genuine, impostor);

  // Walk the sweep to the FAR/FRR sign change and interpolate linearly
  // between the two bracketing thresholds. The first point has FAR = 0,
  // FRR = 1 and the appended endpoint has FAR = 1, FRR = 0, so the crossing
  // always exists.
  const RocPoint* lo = nullptr;
  for (const auto& p : points) {
    const double diff = p.far - p.frr;
    if (diff == 0.0) return 100.0 * p.far;
    if (diff > 0.0) {
      if (lo == nullptr) return 100.0 * p.far;  // cannot happen: first diff is -1
      const double denom = (p.far - lo->far) + (lo->frr - p.frr);
      const double theta = denom > 0.0 ? (lo->frr - lo->far) / denom : 0.0;
      return 100.0 * (lo->far + theta * (p.far - lo->far));
    }
    lo = &p;
  }
  return 100.0;  // FAR stays below FRR everywhere; degenerate
}

}  // namespace kbio
