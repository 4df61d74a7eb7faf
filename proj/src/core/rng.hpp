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

#ifndef KBIO_CORE_RNG_HPP_
#define KBIO_CORE_RNG_HPP_

#include <cstdint>
#include <vector>

namespace kbio {

// Purpose tags for deriving independent sub-seeds from one root seed.
// Values are part of the reproducibility contract; never renumber.
enum class SeedPurpose : std::uint64_t {
  kSynth = 1,
  kSplit = 2,
  kInit = 3,
  kSampler = 4,
  kDropout = 5,
  kAuthProtocol = 6,
  kIdentProtocol = 7,
  kAnalysis = 8,
  kPlot = 9,
};

// Mixes a root seed with a purpose tag (and an optional index) into a
// stable stream seed. splitmix64 finalizer; identical on all platforms.
std::uint64_t derive_seed(std::uint64_t root, SeedPurpose purpose,
                          std::uint64_t index = 0);

// xoshiro256** with fully specified output mapping. std:: distributions are
// implementation-defined, so all sampling is done here by hand.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform in [0, 1) with 53 random bits.
  double uniform01();

  // Uniform integer in [0, n); unbiased via rejection. n must be > 0.
  std::uint64_t below(std::uint64_t n);

  // Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi);

  double uniform(double lo, double hi);

  // Box-Muller without caching the second variate.
  double gauss(double mean, double stddev);

  // Fisher-Yates.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::uint64_t state_[4];
};

}  // namespace kbio

#endif  // KBIO_CORE_RNG_HPP_
