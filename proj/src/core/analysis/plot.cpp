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

#include "core/analysis/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "core/analysis/stats.hpp"
#include "core/common.hpp"

namespace kbio {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 55.0;

constexpr const char* kSeriesColor[] = {"#1f5fa8", "#c95f3d", "#3d8f52", "#7a4fa0"};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string fmt_tick(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

struct Range {
  double lo = 0.0;
  double hi = 1.0;
};

Range padded_range(double lo, double hi) {
  if (lo > hi) std::swap(lo, hi);
  double span = hi - lo;
  if (span <= 0.0) span = (std::abs(lo) > 1e-12) ? std::abs(lo) : 1.0;
  return {lo - 0.05 * span, hi + 0.05 * span};
}

}  // namespace

std::string render_plot(const Plot& plot) {
  if (plot.points.empty()) throw DataError("emit_plot: no points");

  double x_lo = plot.points.front().x, x_hi = x_lo;
  double y_lo = plot.points.front().y, y_hi = y_lo;
  int max_series = 0;
  for (const auto& p : plot.points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw DataError("emit_plot: non-finite point");
    }
    x_lo = std::min(x_lo, p.x);
    x_hi = std::max(x_hi, p.x);
    y_lo = std::min(y_lo, p.y);
    y_hi = std::max(y_hi, p.y);
    max_series = std::max(max_series, p.series);
  }
  const Range xr = padded_range(x_lo, x_hi);
  const Range yr = padded_range(y_lo, y_hi);

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  const auto sx = [&](double x) {
    return kMarginLeft + (x - xr.lo) / (xr.hi - xr.lo) * plot_w;
  };
  const auto sy = [&](double y) {
    return kHeight - kMarginBottom - (y - yr.lo) / (yr.hi - yr.lo) * plot_h;
  };

  LinearFit fit;
  bool have_fit = false;
  if (plot.kind == PlotKind::kScatter && plot.with_regression && plot.points.size() >= 2) {
    std::vector<double> xs, ys;
    xs.reserve(plot.points.size());
    ys.reserve(plot.points.size());
    for (const auto& p : plot.points) {
      xs.push_back(p.x);
      ys.push_back(p.y);
    }
    fit = linear_regression(xs, ys);
    have_fit = true;
  }

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
      << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";

  out << "<!--kbio:meta\n";
  const char* kind_name = plot.kind == PlotKind::kRoc ? "roc"
                          : plot.kind == PlotKind::kScatter ? "scatter"
                                                            : "line";
  out << "kind=" << kind_name << "\n";
  out << "n=" << plot.points.size() << "\n";
  if (have_fit) {
    out << "slope=" << fmt(fit.slope) << "\n";
    out << "intercept=" << fmt(fit.intercept) << "\n";
  }
  for (const auto& [key, value] : plot.metadata) {
    out << key << "=" << value << "\n";
  }
  out << "-->\n";

  out << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"#ffffff\"/>\n";

  // Axes with 5 ticks per side.
  out << "<g stroke=\"#333333\" stroke-width=\"1\" fill=\"none\">\n";
  out << "<line x1=\"" << fmt(kMarginLeft) << "\" y1=\"" << fmt(kHeight - kMarginBottom)
      << "\" x2=\"" << fmt(kWidth - kMarginRight) << "\" y2=\""
      << fmt(kHeight - kMarginBottom) << "\"/>\n";
  out << "<line x1=\"" << fmt(kMarginLeft) << "\" y1=\"" << fmt(kMarginTop) << "\" x2=\""
      << fmt(kMarginLeft) << "\" y2=\"" << fmt(kHeight - kMarginBottom) << "\"/>\n";
  out << "</g>\n";
  out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">\n";
  for (int i = 0; i <= 5; ++i) {
    const double tx = xr.lo + (xr.hi - xr.lo) * i / 5.0;
    const double ty = yr.lo + (yr.hi - yr.lo) * i / 5.0;
    out << "<text x=\"" << fmt(sx(tx)) << "\" y=\"" << fmt(kHeight - kMarginBottom + 16)
        << "\" text-anchor=\"middle\">" << fmt_tick(tx) << "</text>\n";
    out << "<text x=\"" << fmt(kMarginLeft - 6) << "\" y=\"" << fmt(sy(ty) + 4)
        << "\" text-anchor=\"end\">" << fmt_tick(ty) << "</text>\n";
  }
  out << "<text x=\"" << fmt(kMarginLeft + plot_w / 2) << "\" y=\"" << fmt(kHeight - 12)
      << "\" text-anchor=\"middle\">" << escape(plot.x_label) << "</text>\n";
  out << "<text x=\"16\" y=\"" << fmt(kMarginTop + plot_h / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << fmt(kMarginTop + plot_h / 2) << ")\">" << escape(plot.y_label) << "</text>\n";
  out << "<text x=\"" << fmt(kWidth / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(plot.title) << "</text>\n";
  out << "</g>\n";

  if (plot.kind == PlotKind::kScatter) {
    for (int s = 0; s <= max_series; ++s) {
      out << "<g fill=\"" << kSeriesColor[s % 4] << "\" fill-opacity=\"0.7\">\n";
      for (const auto& p : plot.points) {
        if (p.series != s) continue;
        out << "<circle cx=\"" << fmt(sx(p.x)) << "\" cy=\"" << fmt(sy(p.y))
            << "\" r=\"2.5\"/>\n";
      }
      out << "</g>\n";
    }
    if (have_fit) {
      const double y1 = fit.intercept + fit.slope * xr.lo;
      const double y2 = fit.intercept + fit.slope * xr.hi;
      out << "<line x1=\"" << fmt(sx(xr.lo)) << "\" y1=\"" << fmt(sy(y1)) << "\" x2=\""
          << fmt(sx(xr.hi)) << "\" y2=\"" << fmt(sy(y2))
          << "\" stroke=\"#c0392b\" stroke-width=\"1.5\"/>\n";
    }
  } else {
    // roc / line: one polyline per series, points in input order.
    for (int s = 0; s <= max_series; ++s) {
      out << "<polyline fill=\"none\" stroke=\"" << kSeriesColor[s % 4]
          << "\" stroke-width=\"1.5\" points=\"";
      bool first = true;
      for (const auto& p : plot.points) {
        if (p.series != s) continue;
        if (!first) out << ' ';
        out << fmt(sx(p.x)) << ',' << fmt(sy(p.y));
        first = false;
      }
      out << "\"/>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

void emit_plot(const Plot& plot, const std::string& path) {
  const std::string svg = render_plot(plot);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("emit_plot: cannot write '" + path + "'");
  out.write(svg.data(), static_cast<std::streamsize>(svg.size()));
  if (!out) throw DataError("emit_plot: write to '" + path + "' failed");
}

}  // namespace kbio
