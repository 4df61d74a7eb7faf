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
#include <set>

#include "core/common.hpp"
#include "core/data/features.hpp"
#include "core/data/log_io.hpp"
#include "core/data/split.hpp"
#include "core/data/synth.hpp"
#include "core/rng.hpp"
#include "doctest.h"

using namespace kbio;

namespace {

const char* kTwoLineLog =
    "subject_id,session_id,keycode,press_ms,release_ms\n"
    "alice,a1,65,0,80\n"
    "alice,a1,66,200,290\n";

KeystrokeSequence make_seq(std::vector<std::array<std::int64_t, 3>> rows) {
  KeystrokeSequence seq;
  seq.subject_id = "s";
  seq.session_id = "q";
  for (const auto& r : rows) {
    seq.events.push_back({static_cast<int>(r[0]), r[1], r[2]});
  }
  return seq;
}

}  // namespace

TEST_CASE("parse_log: two well-formed lines form one sequence") {
  const auto result = parse_log_string(kTwoLineLog);
  REQUIRE(result.dataset.size() == 1);
  const auto& seq = result.dataset[0];
  CHECK(seq.subject_id == "alice");
  CHECK(seq.session_id == "a1");
  REQUIRE(seq.events.size() == 2);
  CHECK(seq.events[0].keycode == 65);
  CHECK(seq.events[1].press_ms == 200);
  CHECK(result.dropped_short == 0);
}

TEST_CASE("parse_log: keycode out of range names the line") {
  const std::string log =
      "subject_id,session_id,keycode,press_ms,release_ms\n"
      "alice,a1,65,0,80\n"
      "alice,a1,300,200,290\n";
  CHECK_THROWS_WITH_AS(parse_log_string(log),
                       doctest::Contains("line 3"), DataError);
}

TEST_CASE("parse_log: release before press rejected") {
  const std::string log =
      "subject_id,session_id,keycode,press_ms,release_ms\n"
      "alice,a1,65,100,80\n";
  CHECK_THROWS_AS(parse_log_string(log), DataError);
}

TEST_CASE("parse_log: malformed line reported with its number") {
  const std::string log =
      "subject_id,session_id,keycode,press_ms,release_ms\n"
      "alice,a1,65,0\n";
  CHECK_THROWS_WITH_AS(parse_log_string(log), doctest::Contains("line 2"), DataError);
}

TEST_CASE("parse_log: single-event sequences dropped with a count") {
  const std::string log =
      "subject_id,session_id,keycode,press_ms,release_ms\n"
      "alice,a1,65,0,80\n"
      "alice,a1,66,200,290\n"
      "bob,b1,70,0,50\n";
  const auto result = parse_log_string(log);
  CHECK(result.dataset.size() == 1);
  CHECK(result.dropped_short == 1);
}

TEST_CASE("parse_log: out-of-order events sorted, duplicates dropped") {
  const std::string log =
      "subject_id,session_id,keycode,press_ms,release_ms\n"
      "alice,a1,66,200,290\n"
      "alice,a1,65,0,80\n"
      "alice,a1,66,200,290\n";
  const auto result = parse_log_string(log);
  REQUIRE(result.dataset.size() == 1);
  REQUIRE(result.dataset[0].events.size() == 2);
  CHECK(result.dataset[0].events[0].press_ms == 0);
  CHECK(result.duplicate_events == 1);
}

TEST_CASE("generator/parser round trip") {
  SynthConfig cfg;
  cfg.num_subjects = 3;
  cfg.sessions_per_subject = 15;
  cfg.seed = 99;
  const Dataset generated = generate_synthetic(cfg);
  REQUIRE(generated.size() == 45);
  const auto result = parse_log_string(serialize_log_string(generated));
  CHECK(result.dataset == generated);
}

TEST_CASE("extract_features: worked example") {
  const auto seq = [] {
    KeystrokeSequence s = make_seq({{65, 0, 80}, {66, 200, 290}});
    return s;
  }();
  const auto fs = extract_features(seq);
  REQUIRE(fs.valid_len() == 2);
  CHECK(fs.frames[0].hl == doctest::Approx(0.08).epsilon(1e-12));
  CHECK(fs.frames[0].il == 0.0);
  CHECK(fs.frames[0].pl == 0.0);
  CHECK(fs.frames[0].rl == 0.0);
  CHECK(fs.frames[0].key_norm == doctest::Approx(65.0 / 255.0).epsilon(1e-12));
  CHECK(fs.frames[1].hl == doctest::Approx(0.09).epsilon(1e-12));
  CHECK(fs.frames[1].il == doctest::Approx(0.12).epsilon(1e-12));
  CHECK(fs.frames[1].pl == doctest::Approx(0.20).epsilon(1e-12));
  CHECK(fs.frames[1].rl == doctest::Approx(0.21).epsilon(1e-12));
  CHECK(fs.frames[1].key_norm == doctest::Approx(66.0 / 255.0).epsilon(1e-12));
}

TEST_CASE("extract_features: keycode 255 normalizes to 1") {
  const auto fs = extract_features(make_seq({{255, 0, 10}, {255, 20, 30}}));
  CHECK(fs.frames[0].key_norm == 1.0);
  CHECK(fs.frames[1].key_norm == 1.0);
}

TEST_CASE("extract_features: rollover keeps negative inter-key latency") {
  // Second key pressed before the first is released.
  const auto fs = extract_features(make_seq({{65, 0, 150}, {66, 100, 220}}));
  CHECK(fs.frames[1].il == doctest::Approx(-0.05).epsilon(1e-12));
}

TEST_CASE("extract_features: single event rejected") {
  CHECK_THROWS_AS(extract_features(make_seq({{65, 0, 80}})), DataError);
}

TEST_CASE("pad_or_truncate: pad, truncate, identity") {
  const auto fs = extract_features(
      make_seq({{65, 0, 80}, {66, 200, 290}, {67, 400, 480}}));

  SUBCASE("N=3 to M=5 zero-pads the tail") {
    const auto padded = pad_or_truncate(fs, 5);
    CHECK(padded.padded_len == 5);
    CHECK(padded.mask == std::vector<std::uint8_t>{1, 1, 1, 0, 0});
    for (int t = 3; t < 5; ++t) {
      for (int c = 0; c < kFeatureDim; ++c) {
        CHECK(padded.matrix[static_cast<std::size_t>(t) * kFeatureDim + c] == 0.0);
      }
    }
  }
  SUBCASE("N>M keeps the first M frames") {
    const auto truncated = pad_or_truncate(fs, 2);
    CHECK(truncated.mask == std::vector<std::uint8_t>{1, 1});
    CHECK(truncated.matrix[0] == fs.frames[0].hl);
    CHECK(truncated.matrix[kFeatureDim + 4] == fs.frames[1].key_norm);
  }
  SUBCASE("N=M is the identity on the first N rows") {
    const auto same = pad_or_truncate(fs, 3);
    for (int t = 0; t < 3; ++t) {
      CHECK(same.matrix[static_cast<std::size_t>(t) * kFeatureDim] == fs.frames[static_cast<std::size_t>(t)].hl);
      CHECK(same.mask[static_cast<std::size_t>(t)] == 1);
    }
  }
}

TEST_CASE("feature identities on random sequences") {
  // pl_k = il_k + hl_{k-1} and rl_k = il_k + hl_k fall out of the timing
  // geometry; check they hold exactly on generated data.
  SynthConfig cfg;
  cfg.num_subjects = 5;
  cfg.sessions_per_subject = 3;
  cfg.seed = 7;
  for (const auto& seq : generate_synthetic(cfg)) {
    const auto fs = extract_features(seq);
    for (std::size_t k = 1; k < fs.frames.size(); ++k) {
      CHECK(fs.frames[k].pl ==
            doctest::Approx(fs.frames[k].il + fs.frames[k - 1].hl).epsilon(1e-12));
      CHECK(fs.frames[k].rl ==
            doctest::Approx(fs.frames[k].il + fs.frames[k].hl).epsilon(1e-12));
    }
    for (const auto& f : fs.frames) {
      CHECK(f.hl >= 0.0);
      CHECK(f.key_norm >= 0.0);
      CHECK(f.key_norm <= 1.0);
    }
  }
}

TEST_CASE("pad preserves the first N rows bit-exactly") {
  SynthConfig cfg;
  cfg.num_subjects = 2;
  cfg.sessions_per_subject = 2;
  cfg.seed = 13;
  for (const auto& seq : generate_synthetic(cfg)) {
    const auto fs = extract_features(seq);
    const auto padded = pad_or_truncate(fs, fs.valid_len() + 17);
    for (int t = 0; t < fs.valid_len(); ++t) {
      const auto& f = fs.frames[static_cast<std::size_t>(t)];
      const double* row = padded.matrix.data() + static_cast<std::size_t>(t) * kFeatureDim;
      CHECK(row[0] == f.hl);
      CHECK(row[1] == f.il);
      CHECK(row[2] == f.pl);
      CHECK(row[3] == f.rl);
      CHECK(row[4] == f.key_norm);
    }
  }
}

TEST_CASE("generate_synthetic: deterministic and correctly sized") {
  SynthConfig cfg;
  cfg.num_subjects = 100;
  cfg.sessions_per_subject = 15;
  cfg.seed = 42;
  const Dataset a = generate_synthetic(cfg);
  const Dataset b = generate_synthetic(cfg);
  CHECK(serialize_log_string(a) == serialize_log_string(b));
  CHECK(a.size() == 1500);
  for (const auto& seq : a) CHECK(seq.events.size() >= 2);
}

TEST_CASE("generate_synthetic: same-subject sessions are closer in mean hold time") {
  SynthConfig cfg;
  cfg.num_subjects = 100;
  cfg.sessions_per_subject = 4;
  cfg.seed = 3;
  const Dataset data = generate_synthetic(cfg);

  auto mean_hl = [](const KeystrokeSequence& seq) {
    double sum = 0.0;
    for (const auto& e : seq.events) sum += static_cast<double>(e.release_ms - e.press_ms);
    return sum / (1000.0 * static_cast<double>(seq.events.size()));
  };

  const auto groups = group_by_subject(data);
  std::vector<std::vector<double>> per_subject;
  for (const auto& [subject, indices] : groups) {
    std::vector<double> means;
    for (const auto idx : indices) means.push_back(mean_hl(data[idx]));
    per_subject.push_back(means);
  }

  double within = 0.0;
  int within_n = 0;
  for (const auto& means : per_subject) {
    for (std::size_t i = 0; i < means.size(); ++i) {
      for (std::size_t j = i + 1; j < means.size(); ++j) {
        within += std::abs(means[i] - means[j]);
        ++within_n;
      }
    }
  }
  double across = 0.0;
  int across_n = 0;
  for (std::size_t a = 0; a < per_subject.size(); ++a) {
    for (std::size_t b = a + 1; b < per_subject.size(); ++b) {
      across += std::abs(per_subject[a][0] - per_subject[b][0]);
      ++across_n;
    }
  }
  CHECK(within / within_n < across / across_n);
}

TEST_CASE("split_subjects: balanced, deterministic, a true partition") {
  SynthConfig cfg;
  cfg.num_subjects = 10;
  cfg.sessions_per_subject = 3;
  cfg.seed = 5;
  const Dataset data = generate_synthetic(cfg);

  const auto [train, test] = split_subjects(data, 0.5, 11);
  const auto train_ids = subject_ids(train);
  const auto test_ids = subject_ids(test);
  CHECK(train_ids.size() == 5);
  CHECK(test_ids.size() == 5);

  std::set<std::string> all(train_ids.begin(), train_ids.end());
  for (const auto& id : test_ids) {
    CHECK(all.count(id) == 0);
    all.insert(id);
  }
  const auto original = subject_ids(data);
  CHECK(all == std::set<std::string>(original.begin(), original.end()));

  const auto [train2, test2] = split_subjects(data, 0.5, 11);
  CHECK(train2 == train);
  CHECK(test2 == test);
}

TEST_CASE("split_subjects: fewer than 2 subjects is an error") {
  SynthConfig cfg;
  cfg.num_subjects = 1;
  cfg.sessions_per_subject = 2;
  const Dataset data = generate_synthetic(cfg);
  CHECK_THROWS_AS(split_subjects(data, 0.5, 1), DataError);
}

TEST_CASE("attributes survive the serialization round trip") {
  SynthConfig cfg;
  cfg.num_subjects = 4;
  cfg.sessions_per_subject = 2;
  cfg.seed = 21;
  const Dataset data = generate_synthetic(cfg);
  for (const auto& seq : data) {
    REQUIRE(seq.attributes.count("country") == 1);
  }
  const auto parsed = parse_log_string(serialize_log_string(data));
  CHECK(parsed.dataset == data);
}
