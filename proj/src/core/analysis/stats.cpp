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

#include "core/analysis/stats.hpp"

#include <cmath>

#include "core/common.hpp"

namespace kbio {

namespace {

struct Moments {
  double mean_x = 0.0;
  double mean_y = 0.0;
  double cov = 0.0;  // sum of cross-deviations
  double var_x = 0.0;
  double var_y = 0.0;
};

Moments moments(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ConfigError("stats: length mismatch");
  if (x.size() < 2) throw ConfigError("stats: need at least 2 samples");
  Moments m;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    m.mean_x += x[i];
    m.mean_y += y[i];
  }
  m.mean_x /= n;
  m.mean_y /= n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - m.mean_x;
    const double dy = y[i] - m.mean_y;
    m.cov += dx * dy;
    m.var_x += dx * dx;
    m.var_y += dy * dy;
  }
  return m;
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
  const Moments m = moments(x, y);
  if (m.var_x == 0.0 || m.var_y == 0.0) {
    throw DataError("pearson: correlation undefined for constant input");
  }
  return m.cov / std::sqrt(m.var_x * m.var_y);
}

LinearFit linear_regression(std::span<const double> x, std::span<const double> y) {
  const Moments m = moments(x, y);
  if (m.var_x == 0.0) throw DataError("linear_regression: constant regressor");
  LinearFit fit;
  fit.slope = m.cov / m.var_x;
  fit.intercept = m.mean_y - fit.slope * m.mean_x;
  return fit;
}

}  // namespace kbio
