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

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "core/common.hpp"
#include "core/data/synth.hpp"
#include "core/learn/adam.hpp"
#include "core/learn/losses.hpp"
#include "core/learn/sampler.hpp"
#include "core/learn/trainer.hpp"
#include "core/net/checkpoint.hpp"
#include "core/net/forward.hpp"
#include "core/rng.hpp"
#include "doctest.h"

using namespace kbio;

TEST_CASE("euclidean_distance: basic identities and formula oracle") {
  const std::vector<double> zero(4, 0.0);
  CHECK(euclidean_distance(zero, zero) == 0.0);

  const std::vector<double> a{3.0, 4.0, 0.0, 0.0};
  CHECK(euclidean_distance(a, zero) == doctest::Approx(5.0).epsilon(1e-15));

  Rng rng(10);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(8), y(8);
    for (std::size_t i = 0; i < 8; ++i) {
      x[i] = rng.gauss(0.0, 2.0);
      y[i] = rng.gauss(0.0, 2.0);
    }
    double direct = 0.0;
    for (std::size_t i = 0; i < 8; ++i) direct += (x[i] - y[i]) * (x[i] - y[i]);
    direct = std::sqrt(direct);
    CHECK(euclidean_distance(x, y) == doctest::Approx(direct).epsilon(1e-12));
  }

  CHECK_THROWS_AS(euclidean_distance(a, std::vector<double>(3, 0.0)), ConfigError);
}

TEST_CASE("softmax_loss: uniform, saturated, and hand-evaluated cases") {
  CHECK(softmax_loss(std::vector<double>(4, 1.0), 2) ==
        doctest::Approx(std::log(4.0)).epsilon(1e-12));

  CHECK(softmax_loss(std::vector<double>{50.0, 0.0, 0.0}, 0) < 1e-20);

  // -log(e^2 / (e^1 + e^2 + e^3))
  CHECK(softmax_loss(std::vector<double>{1.0, 2.0, 3.0}, 1) ==
        doctest::Approx(1.407605964).epsilon(1e-9));

  CHECK_THROWS_AS(softmax_loss(std::vector<double>{1.0, 2.0}, 2), ConfigError);
  CHECK_THROWS_AS(softmax_loss(std::vector<double>{1.0}, 0), ConfigError);
}

TEST_CASE("softmax_loss: gradient matches finite differences") {
  Rng rng(3);
  std::vector<double> logits(5);
  for (auto& z : logits) z = rng.gauss(0.0, 2.0);
  std::vector<double> grad;
  softmax_loss(logits, 3, &grad);
  const double h = 1e-6;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    auto up = logits, down = logits;
    up[i] += h;
    down[i] -= h;
    const double numeric = (softmax_loss(up, 3) - softmax_loss(down, 3)) / (2.0 * h);
    CHECK(grad[i] == doctest::Approx(numeric).epsilon(1e-6));
  }
}

TEST_CASE("contrastive_loss: direct evaluations") {
  CHECK(contrastive_loss(0.0, 0, 1.5) == 0.0);
  CHECK(contrastive_loss(1.5, 1, 1.5) == 0.0);
  CHECK(contrastive_loss(2.7, 1, 1.5) == 0.0);
  CHECK(contrastive_loss(0.0, 1, 1.5) == doctest::Approx(1.125).epsilon(1e-15));
  CHECK(contrastive_loss(2.0, 0, 1.5) == doctest::Approx(2.0).epsilon(1e-15));

  double dd = 0.0;
  contrastive_loss(0.7, 0, 1.5, &dd);
  CHECK(dd == doctest::Approx(0.7).epsilon(1e-15));
  contrastive_loss(0.7, 1, 1.5, &dd);
  CHECK(dd == doctest::Approx(-0.8).epsilon(1e-15));
}

TEST_CASE("triplet_loss: direct evaluations") {
  CHECK(triplet_loss(0.9, 0.9, 1.5) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(triplet_loss(0.1, 2.0, 1.5) == 0.0);
  CHECK(triplet_loss(1.0, 1.2, 1.5) == doctest::Approx(1.06).epsilon(1e-12));

  double dap = 0.0, dan = 0.0;
  triplet_loss(1.0, 1.2, 1.5, &dap, &dan);
  CHECK(dap == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(dan == doctest::Approx(-2.4).epsilon(1e-15));
}

TEST_CASE("losses: nonnegative everywhere, zero on satisfied margins") {
  Rng rng(9);
  for (int trial = 0; trial < 1000; ++trial) {
    const double d = rng.uniform01() * 3.0;
    const double alpha = rng.uniform01() * 2.0;
    CHECK(contrastive_loss(d, trial % 2, alpha) >= 0.0);
    const double d_ap = rng.uniform01() * 2.0;
    const double d_an = rng.uniform01() * 2.0;
    CHECK(triplet_loss(d_ap, d_an, alpha) >= 0.0);
    if (d_an * d_an - d_ap * d_ap >= alpha) {
      CHECK(triplet_loss(d_ap, d_an, alpha) == 0.0);
    }
  }
}

namespace {

Dataset small_synth(int subjects, int sessions, std::uint64_t seed) {
  SynthConfig cfg;
  cfg.num_subjects = subjects;
  cfg.sessions_per_subject = sessions;
  cfg.mean_sentence_len = 12;
  cfg.seed = seed;
  return generate_synthetic(cfg);
}

}  // namespace

TEST_CASE("sample_pair_batch: balanced counts and valid membership") {
  const Dataset data = small_synth(4, 15, 2);
  const TrainData pool = prepare_train_data(data, 10);
  Rng rng(5);

  const auto batch = sample_pair_batch(pool, 512, rng);
  REQUIRE(batch.size() == 512);
  int genuine = 0;
  for (const auto& pair : batch) {
    const auto& a = pool.padded[pair.a];
    const auto& b = pool.padded[pair.b];
    if (pair.label == 0) {
      ++genuine;
      CHECK(a.subject_id == b.subject_id);
      CHECK(pair.a != pair.b);
    } else {
      CHECK(a.subject_id != b.subject_id);
    }
  }
  CHECK(genuine == 256);

  for (const int odd : {5, 7, 513}) {
    const auto odd_batch = sample_pair_batch(pool, odd, rng);
    int g = 0;
    for (const auto& pair : odd_batch) g += pair.label == 0 ? 1 : -1;
    CHECK(std::abs(g) <= 1);
  }
}

TEST_CASE("sample_pair_batch: exhaustive small pool stays within bounds") {
  const Dataset data = small_synth(2, 2, 3);
  const TrainData pool = prepare_train_data(data, 10);
  Rng rng(8);
  const auto batch = sample_pair_batch(pool, 4, rng);
  for (const auto& pair : batch) {
    CHECK(pair.a < pool.padded.size());
    CHECK(pair.b < pool.padded.size());
    CHECK(pair.a != pair.b);
  }
}

TEST_CASE("sample_pair_batch: all 105 genuine combinations appear") {
  // 15 sessions -> 105 unordered same-subject pairs; over ~10,000 draws each
  // combination shows up.
  const Dataset data = small_synth(2, 15, 4);
  const TrainData pool = prepare_train_data(data, 10);
  Rng rng(6);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  int genuine_draws = 0;
  while (genuine_draws < 10000) {
    for (const auto& pair : sample_pair_batch(pool, 512, rng)) {
      if (pair.label != 0) continue;
      ++genuine_draws;
      if (pool.padded[pair.a].subject_id != pool.subjects[0]) continue;
      seen.insert({std::min(pair.a, pair.b), std::max(pair.a, pair.b)});
    }
  }
  CHECK(seen.size() == 105);
}

TEST_CASE("sample_pair_batch: insufficient data is an error") {
  const Dataset one_subject = small_synth(1, 15, 5);
  const TrainData pool = prepare_train_data(one_subject, 10);
  Rng rng(1);
  CHECK_THROWS_AS(sample_pair_batch(pool, 8, rng), DataError);
}

TEST_CASE("sample_triplet_batch: constraints, determinism, anchor uniformity") {
  const Dataset data = small_synth(10, 15, 7);
  const TrainData pool = prepare_train_data(data, 10);

  Rng rng_a(12), rng_b(12);
  const auto batch_a = sample_triplet_batch(pool, 64, rng_a);
  const auto batch_b = sample_triplet_batch(pool, 64, rng_b);
  for (std::size_t i = 0; i < batch_a.size(); ++i) {
    CHECK(batch_a[i].anchor == batch_b[i].anchor);
    CHECK(batch_a[i].positive == batch_b[i].positive);
    CHECK(batch_a[i].negative == batch_b[i].negative);
  }

  std::map<std::string, int> anchor_counts;
  Rng rng(17);
  const int draws = 10000;
  int seen = 0;
  while (seen < draws) {
    for (const auto& t : sample_triplet_batch(pool, 100, rng)) {
      const auto& anchor = pool.padded[t.anchor];
      const auto& positive = pool.padded[t.positive];
      const auto& negative = pool.padded[t.negative];
      CHECK(anchor.subject_id == positive.subject_id);
      CHECK(t.anchor != t.positive);
      CHECK(anchor.subject_id != negative.subject_id);
      if (seen < draws) ++anchor_counts[anchor.subject_id];
      ++seen;
    }
  }
  // Multinomial: expected 1000 per subject, sigma = sqrt(n p (1-p)) = 30.
  for (const auto& [subject, count] : anchor_counts) {
    CHECK(std::abs(count - 1000) <= 90);
  }
}

TEST_CASE("adam: zero gradient leaves parameters unchanged, decays moments") {
  const ModelConfig cfg = [] {
    ModelConfig c;
    c.units = 3;
    c.max_seq_len = 4;
    return c;
  }();
  ModelParams params = init_params(cfg, 1);
  const ModelParams before = params;
  AdamState state = make_adam_state(params);
  state.m.assign(state.m.size(), 0.5);
  state.v.assign(state.v.size(), 0.25);
  Gradients grads = zero_gradients(params);
  const AdamConfig adam_cfg{0.05, 0.9, 0.999, 1e-8};
  adam_step(params, grads, state, adam_cfg);
  CHECK(state.t == 1);
  for (std::size_t i = 0; i < state.m.size(); ++i) {
    CHECK(state.m[i] == doctest::Approx(0.45).epsilon(1e-15));
    CHECK(state.v[i] == doctest::Approx(0.25 * 0.999).epsilon(1e-15));
  }
  // With m and v both nonzero the parameters move, but with zero moments and
  // zero gradient they must stay put:
  ModelParams fresh = init_params(cfg, 1);
  AdamState zero_state = make_adam_state(fresh);
  adam_step(fresh, grads, zero_state, adam_cfg);
  for (std::size_t a = 0; a < trainable_arrays(fresh).size(); ++a) {
    const auto views_new = trainable_arrays(fresh);
    const auto views_old = trainable_arrays(const_cast<ModelParams&>(before));
    for (std::size_t i = 0; i < views_new[a].size; ++i) {
      CHECK(views_new[a].data[i] == views_old[a].data[i]);
    }
  }
}

TEST_CASE("adam: first step moves by about -lr * sign(gradient)") {
  double p[2] = {1.0, -2.0};
  const double g[2] = {0.3, -4.0};  // |g| >> epsilon
  double m[2] = {0.0, 0.0};
  double v[2] = {0.0, 0.0};
  const AdamConfig cfg{0.05, 0.9, 0.999, 1e-8};
  adam_update_flat(p, g, m, v, 2, 1, cfg);
  CHECK(p[0] == doctest::Approx(1.0 - 0.05).epsilon(1e-6));
  CHECK(p[1] == doctest::Approx(-2.0 + 0.05).epsilon(1e-6));
}

TEST_CASE("adam: three steps on a quadratic match a scalar reference") {
  // Minimize f(p) = (p0 - 1)^2 + 2 (p1 + 3)^2 from (0, 0).
  double p[2] = {0.0, 0.0};
  double m[2] = {0.0, 0.0};
  double v[2] = {0.0, 0.0};
  const AdamConfig cfg{0.1, 0.9, 0.999, 1e-8};

  // Independent hand-rolled sequence.
  double rp[2] = {0.0, 0.0};
  double rm[2] = {0.0, 0.0};
  double rv[2] = {0.0, 0.0};
  for (int t = 1; t <= 3; ++t) {
    const double g[2] = {2.0 * (p[0] - 1.0), 4.0 * (p[1] + 3.0)};
    adam_update_flat(p, g, m, v, 2, t, cfg);

    const double rg[2] = {2.0 * (rp[0] - 1.0), 4.0 * (rp[1] + 3.0)};
    for (int i = 0; i < 2; ++i) {
      rm[i] = 0.9 * rm[i] + 0.1 * rg[i];
      rv[i] = 0.999 * rv[i] + 0.001 * rg[i] * rg[i];
      const double mh = rm[i] / (1.0 - std::pow(0.9, t));
      const double vh = rv[i] / (1.0 - std::pow(0.999, t));
      rp[i] -= 0.1 * mh / (std::sqrt(vh) + 1e-8);
    }
    CHECK(p[0] == doctest::Approx(rp[0]).epsilon(1e-12));
    CHECK(p[1] == doctest::Approx(rp[1]).epsilon(1e-12));
  }
}

namespace {

TrainConfig tiny_train_config(LossKind kind, int epochs, std::uint64_t seed = 5) {
  TrainConfig cfg;
  cfg.loss_kind = kind;
  cfg.learning_rate = 0.01;
  cfg.epochs = epochs;
  cfg.batches_per_epoch = 4;
  cfg.batch_size = 16;
  cfg.seed = seed;
  return cfg;
}

ModelConfig tiny_model_config() {
  ModelConfig cfg;
  cfg.units = 8;
  cfg.max_seq_len = 12;
  return cfg;
}

}  // namespace

TEST_CASE("train: zero epochs returns the initialized parameters") {
  const Dataset data = small_synth(4, 4, 11);
  const TrainConfig cfg = tiny_train_config(LossKind::kTriplet, 0);
  const auto result = train(data, tiny_model_config(), cfg);
  const ModelParams fresh = init_params(tiny_model_config(), cfg.seed);
  CHECK(result.params.layer1.w == fresh.layer1.w);
  CHECK(result.params.layer2.u == fresh.layer2.u);
  CHECK(result.adam.t == 0);
  CHECK(result.history.epochs.empty());
}

TEST_CASE("train: triplet loss falls over a tiny run") {
  SynthConfig cfg;
  cfg.num_subjects = 10;
  cfg.sessions_per_subject = 6;
  cfg.mean_sentence_len = 12;
  cfg.hold_session_sd = 0.004;  // well-separated subjects: progress is quick
  cfg.gap_session_sd = 0.008;
  cfg.hold_between_sd = 0.02;
  cfg.gap_between_sd = 0.03;
  cfg.seed = 13;
  const Dataset data = generate_synthetic(cfg);
  const auto result = train(data, tiny_model_config(),
                            tiny_train_config(LossKind::kTriplet, 5));
  REQUIRE(result.history.epochs.size() == 5);
  CHECK(result.history.epochs[4].mean_loss < result.history.epochs[0].mean_loss);
}

TEST_CASE("train: identical seeds give identical checkpoints") {
  const Dataset data = small_synth(5, 5, 17);
  const ModelConfig mc = tiny_model_config();
  for (const LossKind kind :
       {LossKind::kTriplet, LossKind::kContrastive, LossKind::kSoftmax}) {
    CAPTURE(to_string(kind));
    const auto r1 = train(data, mc, tiny_train_config(kind, 2));
    const auto r2 = train(data, mc, tiny_train_config(kind, 2));

    const auto tmp = std::filesystem::temp_directory_path();
    const std::string p1 = (tmp / "kbio_a.ckpt").string();
    const std::string p2 = (tmp / "kbio_b.ckpt").string();
    save_checkpoint({r1.params, r1.adam, 5}, p1);
    save_checkpoint({r2.params, r2.adam, 5}, p2);
    std::ifstream f1(p1, std::ios::binary), f2(p2, std::ios::binary);
    const std::string b1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    const std::string b2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(b1 == b2);
    CHECK(!b1.empty());
    std::remove(p1.c_str());
    std::remove(p2.c_str());
  }
}

TEST_CASE("train: softmax attaches a head sized to the subjects, keeps 128-d output") {
  const Dataset data = small_synth(3, 5, 19);
  const auto result = train(data, tiny_model_config(),
                            tiny_train_config(LossKind::kSoftmax, 1));
  REQUIRE(result.params.classifier.has_value());
  CHECK(result.params.classifier->num_classes == 3);

  // Embeddings still come from the recurrent stack, head unused.
  const TrainData pool = prepare_train_data(data, 12);
  const auto embeddings = embed(result.params, pool.padded);
  CHECK(embeddings.front().size() == 8);
}

TEST_CASE("train: softmax with fewer than 2 subjects is an error") {
  const Dataset data = small_synth(1, 5, 23);
  CHECK_THROWS_AS(train(data, tiny_model_config(),
                        tiny_train_config(LossKind::kSoftmax, 1)),
                  DataError);
}

TEST_CASE("train_continue: resumes with the optimizer step counter intact") {
  const Dataset data = small_synth(4, 5, 29);
  const ModelConfig mc = tiny_model_config();
  const auto first = train(data, mc, tiny_train_config(LossKind::kTriplet, 2));
  const std::int64_t t_after = first.adam.t;
  CHECK(t_after == 2 * 4);

  const auto resumed = train_continue(first.params, first.adam, data,
                                      tiny_train_config(LossKind::kTriplet, 1));
  CHECK(resumed.adam.t == t_after + 4);

  const auto once_more = train_continue(first.params, first.adam, data,
                                        tiny_train_config(LossKind::kTriplet, 0));
  CHECK(once_more.adam.t == t_after);
  CHECK(once_more.params.layer1.w == first.params.layer1.w);
}

TEST_CASE("branch gradients accumulate additively into one parameter set") {
  const ModelConfig mc = tiny_model_config();
  ModelParams params = init_params(mc, 3);
  Rng rng(41);

  const Dataset data = small_synth(3, 3, 31);
  const TrainData pool = prepare_train_data(data, mc.max_seq_len);
  Rng drop1(7), drop2(7);

  ModelParams work = params;
  auto f1 = forward_train(work, make_batch(pool.padded, {0, 1}), drop1);
  auto f2 = forward_train(work, make_batch(pool.padded, {2, 3}), drop1);
  std::vector<double> g1(f1.embeddings.size(), 0.5);
  std::vector<double> g2(f2.embeddings.size(), -0.25);

  Gradients sum = backward(params, f1.cache, g1).grads;
  add_gradients(sum, backward(params, f2.cache, g2).grads);

  const Gradients lone1 = backward(params, f1.cache, g1).grads;
  const Gradients lone2 = backward(params, f2.cache, g2).grads;
  auto views_sum = trainable_arrays(sum);
  auto views_1 = trainable_arrays(const_cast<Gradients&>(lone1));
  auto views_2 = trainable_arrays(const_cast<Gradients&>(lone2));
  for (std::size_t a = 0; a < views_sum.size(); ++a) {
    for (std::size_t i = 0; i < views_sum[a].size; ++i) {
      CHECK(views_sum[a].data[i] ==
            doctest::Approx(views_1[a].data[i] + views_2[a].data[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("loss-through-network gradients match finite differences") {
  // Composition check for each loss; acceptance covers many more configs.
  ModelConfig mc;
  mc.units = 4;
  mc.max_seq_len = 6;
  Rng rng(59);

  const Dataset data = small_synth(3, 4, 37);
  const TrainData pool = prepare_train_data(data, mc.max_seq_len);
  const Batch left = make_batch(pool.padded, {0, 4});
  const Batch right = make_batch(pool.padded, {1, 8});
  const double alpha = 1.5;
  const std::uint64_t drop_seed = 4;

  ModelParams base = init_params(mc, 6);
  for (auto& view : trainable_arrays(base)) {
    for (std::size_t i = 0; i < view.size; ++i) view.data[i] += rng.gauss(0.0, 0.05);
  }

  auto contrastive_objective = [&](const ModelParams& p) {
    ModelParams work = p;
    Rng drop(drop_seed);
    const auto fa = forward_train(work, left, drop);
    const auto fb = forward_train(work, right, drop);
    double loss = 0.0;
    for (int i = 0; i < 2; ++i) {
      const std::span<const double> ea{fa.embeddings.data() + i * 4, 4};
      const std::span<const double> eb{fb.embeddings.data() + i * 4, 4};
      loss += contrastive_loss(euclidean_distance(ea, eb), i % 2, alpha) / 2.0;
    }
    return loss;
  };

  // Analytic gradient of the same objective.
  ModelParams work = base;
  Rng drop(drop_seed);
  const auto fa = forward_train(work, left, drop);
  const auto fb = forward_train(work, right, drop);
  std::vector<double> ga(8, 0.0), gb(8, 0.0);
  for (int i = 0; i < 2; ++i) {
    const std::span<const double> ea{fa.embeddings.data() + i * 4, 4};
    const std::span<const double> eb{fb.embeddings.data() + i * 4, 4};
    const double d = euclidean_distance(ea, eb);
    double dd = 0.0;
    contrastive_loss(d, i % 2, alpha, &dd);
    if (d > 1e-12 && dd != 0.0) {
      for (int k = 0; k < 4; ++k) {
        const double diff = (ea[static_cast<std::size_t>(k)] - eb[static_cast<std::size_t>(k)]) / d;
        ga[static_cast<std::size_t>(i * 4 + k)] += 0.5 * dd * diff;
        gb[static_cast<std::size_t>(i * 4 + k)] -= 0.5 * dd * diff;
      }
    }
  }
  Gradients analytic = backward(base, fa.cache, ga).grads;
  add_gradients(analytic, backward(base, fb.cache, gb).grads);

  auto grad_views = trainable_arrays(analytic);
  ModelParams plus = base, minus = base;
  auto views_plus = trainable_arrays(plus);
  auto views_minus = trainable_arrays(minus);
  const double h = 1e-5;
  double worst = 0.0;
  for (std::size_t a = 0; a < views_plus.size(); ++a) {
    for (std::size_t i = 0; i < views_plus[a].size; i += 5) {
      const double saved = views_plus[a].data[i];
      views_plus[a].data[i] = saved + h;
      views_minus[a].data[i] = saved - h;
      const double numeric =
          (contrastive_objective(plus) - contrastive_objective(minus)) / (2.0 * h);
      views_plus[a].data[i] = saved;
      views_minus[a].data[i] = saved;
      const double rel = std::abs(numeric - grad_views[a].data[i]) /
                         std::max({1e-6, std::abs(numeric), std::abs(grad_views[a].data[i])});
      worst = std::max(worst, rel);
    }
  }
  CHECK(worst < 1e-4);
}
