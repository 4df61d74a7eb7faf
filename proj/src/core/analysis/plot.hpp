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

#ifndef KBIO_CORE_ANALYSIS_PLOT_HPP_
#define KBIO_CORE_ANALYSIS_PLOT_HPP_

#include <map>
#include <string>
#include <vector>

namespace kbio {

enum class PlotKind { kRoc, kScatter, kLine };

struct PlotPoint {
  double x = 0.0;
  double y = 0.0;
  int series = 0;
};

// Deterministic SVG output. A plain-text metadata comment block right after
// the opening tag carries the numbers (sample count, fit parameters, any
// extra keys), so tests and scripts can read values without raster parsing.
// Scatter plots with `with_regression` get an ordinary-least-squares overlay
// line; its slope/intercept are also written to the metadata block.
struct Plot {
  PlotKind kind = PlotKind::kLine;
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotPoint> points;
  std::map<std::string, std::string> metadata;
  bool with_regression = false;
};

std::string render_plot(const Plot& plot);
void emit_plot(const Plot& plot, const std::string& path);

}  // namespace kbio

#endif  // KBIO_CORE_ANALYSIS_PLOT_HPP_
