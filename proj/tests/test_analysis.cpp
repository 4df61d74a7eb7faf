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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "core/analysis/levenshtein.hpp"
#include "core/analysis/plot.hpp"
#include "core/analysis/stats.hpp"
#include "core/analysis/text_dependency.hpp"
#include "core/common.hpp"
#include "core/data/synth.hpp"
#include "core/rng.hpp"
#include "doctest.h"

using namespace kbio;

namespace {

// Plain recursive definition, exponential but obviously correct.
int lev_recursive(std::span<const int> a, std::span<const int> b) {
  if (a.empty()) return static_cast<int>(b.size());
  if (b.empty()) return static_cast<int>(a.size());
  const int erase = lev_recursive(a.subspan(1), b) + 1;
  const int insert = lev_recursive(a, b.subspan(1)) + 1;
  const int swap = lev_recursive(a.subspan(1), b.subspan(1)) + (a[0] == b[0] ? 0 : 1);
  return std::min({erase, insert, swap});
}

std::vector<int> bits_to_string(unsigned value, int length) {
  std::vector<int> s;
  for (int i = 0; i < length; ++i) s.push_back(static_cast<int>((value >> i) & 1u));
  return s;
}

}  // namespace

TEST_CASE("levenshtein: textbook cases") {
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(levenshtein("", "abc") == 3);
  CHECK(levenshtein("abc", "") == 3);
  CHECK(levenshtein("same", "same") == 0);
  CHECK(levenshtein("", "") == 0);
}

TEST_CASE("levenshtein: equals the recursive definition on every short binary pair") {
  for (int la = 0; la <= 6; ++la) {
    for (unsigned va = 0; va < (1u << la); ++va) {
      const auto a = bits_to_string(va, la);
      for (int lb = 0; lb <= 6; ++lb) {
        for (unsigned vb = 0; vb < (1u << lb); ++vb) {
          const auto b = bits_to_string(vb, lb);
          REQUIRE(levenshtein(std::span<const int>(a), std::span<const int>(b)) ==
                  lev_recursive(a, b));
        }
      }
    }
  }
}

TEST_CASE("levenshtein: metric properties and length bounds on random strings") {
  Rng rng(11);
  auto random_string = [&rng](int max_len) {
    std::vector<int> s(rng.below(static_cast<std::uint64_t>(max_len) + 1));
    for (auto& c : s) c = static_cast<int>(rng.below(4));
    return s;
  };
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = random_string(8);
    const auto b = random_string(8);
    const auto c = random_string(8);
    const int ab = levenshtein(std::span<const int>(a), std::span<const int>(b));
    const int ba = levenshtein(std::span<const int>(b), std::span<const int>(a));
    const int ac = levenshtein(std::span<const int>(a), std::span<const int>(c));
    const int cb = levenshtein(std::span<const int>(c), std::span<const int>(b));
    CHECK(ab == ba);                       // symmetry
    CHECK((ab == 0) == (a == b));          // identity of indiscernibles
    CHECK(ab <= ac + cb);                  // triangle inequality
    CHECK(ab >= std::abs(static_cast<int>(a.size()) - static_cast<int>(b.size())));
    CHECK(ab <= static_cast<int>(std::max(a.size(), b.size())));
  }
}

TEST_CASE("pearson: perfect, hand-computed, and statistical cases") {
  const std::vector<double> x{1.0, 2.0, 3.0};
  const std::vector<double> y_same{1.0, 2.0, 3.0};
  std::vector<double> y_neg{-1.0, -2.0, -3.0};
  CHECK(pearson(x, y_same) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(pearson(x, y_neg) == doctest::Approx(-1.0).epsilon(1e-12));

  // 15 / sqrt(6 * 38)
  CHECK(pearson(x, std::vector<double>{2.0, 4.0, 7.0}) ==
        doctest::Approx(0.9933992677987828).epsilon(1e-12));
  // 18 / sqrt(6 * 56)
  CHECK(pearson(x, std::vector<double>{2.0, 4.0, 8.0}) ==
        doctest::Approx(0.9819805060619657).epsilon(1e-12));

  CHECK_THROWS_AS(pearson(x, std::vector<double>{5.0, 5.0, 5.0}), DataError);
  CHECK_THROWS_AS(pearson(x, std::vector<double>{1.0, 2.0}), ConfigError);

  Rng rng(2);
  std::vector<double> u(10000), v(10000);
  for (std::size_t i = 0; i < u.size(); ++i) {
    u[i] = rng.gauss(0.0, 1.0);
    v[i] = rng.gauss(0.0, 1.0);
  }
  CHECK(std::abs(pearson(u, v)) < 0.05);
}

TEST_CASE("pearson: invariant under positive affine transforms") {
  Rng rng(3);
  std::vector<double> x(64), y(64);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = rng.gauss(0.0, 2.0);
    y[i] = 0.5 * x[i] + rng.gauss(0.0, 1.0);
  }
  const double base = pearson(x, y);
  std::vector<double> x2 = x, y2 = y;
  for (auto& v : x2) v = 3.0 * v + 7.0;
  for (auto& v : y2) v = 0.25 * v - 2.0;
  CHECK(pearson(x2, y2) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("linear_regression: slope sign matches the correlation sign") {
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x(40), y(40);
    const double true_slope = rng.gauss(0.0, 2.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = rng.gauss(0.0, 1.0);
      y[i] = true_slope * x[i] + rng.gauss(0.0, 0.8);
    }
    const double p = pearson(x, y);
    const LinearFit fit = linear_regression(x, y);
    CHECK((fit.slope > 0) == (p > 0));
  }

  // Exact fit on a line.
  const std::vector<double> lx{0.0, 1.0, 2.0, 3.0};
  const std::vector<double> ly{1.0, 3.0, 5.0, 7.0};
  const LinearFit fit = linear_regression(lx, ly);
  CHECK(fit.slope == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(fit.intercept == doctest::Approx(1.0).epsilon(1e-14));
}

namespace {

// Control dataset: every sequence is the same base text with the first
// `v` keys replaced by 'z', so edit distances between sequences are exactly
// |v1 - v2| and a text-counting embedder reproduces them.
Dataset prefix_variant_dataset(int subjects, int sessions, int length) {
  Dataset data;
  for (int s = 0; s < subjects; ++s) {
    for (int q = 0; q < sessions; ++q) {
      KeystrokeSequence seq;
      seq.subject_id = "c" + std::to_string(100 + s);
      seq.session_id = seq.subject_id + "-" + std::to_string(q);
      const int variant = (s * sessions + q * 7) % (length / 2);
      std::int64_t t = 0;
      for (int i = 0; i < length; ++i) {
        const int keycode = i < variant ? 'z' : 'a' + (i * 5) % 25;
        seq.events.push_back({keycode, t, t + 60});
        t += 150;
      }
      data.push_back(std::move(seq));
    }
  }
  return data;
}

BatchEmbedder text_count_embedder() {
  // Counts 'z' keys among the valid rows: depends only on the typed text.
  return [](const std::vector<FeatureSequence>& padded) {
    std::vector<Embedding> out;
    for (const auto& fs : padded) {
      double count = 0.0;
      for (int t = 0; t < fs.padded_len; ++t) {
        if (!fs.mask[static_cast<std::size_t>(t)]) continue;
        if (std::abs(fs.matrix[static_cast<std::size_t>(t) * kFeatureDim + 4] - 'z' / 255.0) < 1e-9) {
          count += 1.0;
        }
      }
      out.push_back({count, 0.0});
    }
    return out;
  };
}

BatchEmbedder timing_stats_embedder() {
  // Mean/sd of the timing features: ignores the keycode column entirely.
  return [](const std::vector<FeatureSequence>& padded) {
    std::vector<Embedding> out;
    for (const auto& fs : padded) {
      double n = 0.0;
      double sums[4] = {0, 0, 0, 0};
      double sq[4] = {0, 0, 0, 0};
      for (int t = 0; t < fs.padded_len; ++t) {
        if (!fs.mask[static_cast<std::size_t>(t)]) continue;
        n += 1.0;
        for (int c = 0; c < 4; ++c) {
          const double v = fs.matrix[static_cast<std::size_t>(t) * kFeatureDim + c];
          sums[c] += v;
          sq[c] += v * v;
        }
      }
      Embedding e;
      for (int c = 0; c < 4; ++c) {
        const double mean = sums[c] / n;
        e.push_back(mean * 20.0);
        e.push_back(std::sqrt(std::max(0.0, sq[c] / n - mean * mean)) * 20.0);
      }
      out.push_back(std::move(e));
    }
    return out;
  };
}

}  // namespace

TEST_CASE("text dependency: text-driven embeddings show near-perfect correlation") {
  const Dataset control = prefix_variant_dataset(12, 6, 40);
  const auto report = text_dependency_report(text_count_embedder(), control, 50, 12, 5);
  CHECK(std::abs(report.pearson_all) > 0.9);
  CHECK(report.sample_count == 12 * 5 + 12 * 11);
  CHECK(report.scatter.size() == 24);
}

TEST_CASE("text dependency: timing-only embeddings show no correlation") {
  SynthConfig cfg;
  cfg.num_subjects = 25;
  cfg.sessions_per_subject = 6;
  cfg.seed = 33;
  const Dataset data = generate_synthetic(cfg);
  const auto report = text_dependency_report(timing_stats_embedder(), data, 50, 25, 5);
  CHECK(std::abs(report.pearson_all) < 0.1);
}

TEST_CASE("text dependency: regression slope sign matches pooled correlation") {
  const Dataset control = prefix_variant_dataset(8, 6, 30);
  const auto report = text_dependency_report(text_count_embedder(), control, 50, 8, 6);
  CHECK((report.slope > 0) == (report.pearson_all > 0));
}

namespace {

// Minimal well-formedness scan: every opened tag closes in order.
bool well_formed_markup(const std::string& text) {
  std::vector<std::string> stack;
  std::size_t pos = 0;
  while ((pos = text.find('<', pos)) != std::string::npos) {
    if (text.compare(pos, 4, "<!--") == 0) {
      const std::size_t end = text.find("-->", pos);
      if (end == std::string::npos) return false;
      pos = end + 3;
      continue;
    }
    const std::size_t close = text.find('>', pos);
    if (close == std::string::npos) return false;
    std::string tag = text.substr(pos + 1, close - pos - 1);
    pos = close + 1;
    if (tag.empty()) return false;
    if (tag.back() == '/') continue;  // self-closing
    if (tag.front() == '/') {
      const std::string name = tag.substr(1);
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
    } else {
      const std::size_t space = tag.find_first_of(" \t\n");
      stack.push_back(space == std::string::npos ? tag : tag.substr(0, space));
    }
  }
  return stack.empty();
}

std::map<std::string, std::string> parse_meta(const std::string& svg) {
  std::map<std::string, std::string> meta;
  const std::size_t start = svg.find("<!--kbio:meta\n");
  REQUIRE(start != std::string::npos);
  const std::size_t end = svg.find("-->", start);
  REQUIRE(end != std::string::npos);
  std::istringstream block(svg.substr(start + 14, end - start - 14));
  std::string line;
  while (std::getline(block, line)) {
    const std::size_t eq = line.find('=');
    if (eq != std::string::npos) meta[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return meta;
}

}  // namespace

TEST_CASE("emit_plot: two-point ROC renders well-formed markup") {
  Plot plot;
  plot.kind = PlotKind::kRoc;
  plot.title = "roc";
  plot.x_label = "far";
  plot.y_label = "frr";
  plot.points = {{0.0, 1.0, 0}, {1.0, 0.0, 0}};
  const std::string svg = render_plot(plot);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(well_formed_markup(svg));
  const auto meta = parse_meta(svg);
  CHECK(meta.at("kind") == "roc");
  CHECK(meta.at("n") == "2");
}

TEST_CASE("emit_plot: byte-identical for identical input") {
  Plot plot;
  plot.kind = PlotKind::kScatter;
  plot.points = {{0.0, 0.5, 0}, {1.0, 1.5, 1}, {2.0, 2.0, 0}};
  plot.metadata["note"] = "x";
  const auto tmp = std::filesystem::temp_directory_path();
  const std::string p1 = (tmp / "kbio_plot1.svg").string();
  const std::string p2 = (tmp / "kbio_plot2.svg").string();
  emit_plot(plot, p1);
  emit_plot(plot, p2);
  std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
  const std::string b1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
  const std::string b2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
  CHECK(b1 == b2);
  CHECK(!b1.empty());
  std::remove(p1.c_str());
  std::remove(p2.c_str());
}

TEST_CASE("emit_plot: regression overlay recovers y = 2x in the metadata") {
  Plot plot;
  plot.kind = PlotKind::kScatter;
  plot.with_regression = true;
  for (int i = 0; i <= 20; ++i) {
    plot.points.push_back({static_cast<double>(i), 2.0 * i, 0});
  }
  const auto meta = parse_meta(render_plot(plot));
  CHECK(std::abs(std::stod(meta.at("slope")) - 2.0) < 1e-9);
  CHECK(std::abs(std::stod(meta.at("intercept"))) < 1e-9);

  CHECK_THROWS_AS(emit_plot(plot, "/nonexistent-dir/zz/plot.svg"), DataError);
  Plot empty;
  CHECK_THROWS_AS(render_plot(empty), DataError);
}
