// Copyright 2026 the perpetua authors
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

#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace perpetua {

// Philox4x32-10 counter-based generator (Salmon et al., SC 2011).
// A block is addressed by (key, counter); streams never share state, so
// Gaussian increments depend only on (seed, path, step, block) and Monte
// Carlo runs are reproducible under any scheduling.
class Philox {
 public:
  using Block = std::array<std::uint32_t, 4>;

  static Block generate(std::uint64_t key, const Block& counter) {
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    Block x = counter;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(0xD2511F53u) * x[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(0xCD9E8D57u) * x[2];
      const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      x = {hi1 ^ x[1] ^ k0, lo1, hi0 ^ x[3] ^ k1, lo0};
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    return x;
  }
};

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Derives an independent stream seed for a named sub-experiment.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag) {
  return splitmix64(master ^ splitmix64(tag));
}

// Standard normal draws for one (seed, path) stream.  Each simulation step
// starts a fresh counter block sequence, so the draws of step k do not
// depend on how many variates earlier steps consumed.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::uint64_t path_index)
      : key_(seed), path_(static_cast<std::uint32_t>(splitmix64(path_index))),
        path_hi_(static_cast<std::uint32_t>(splitmix64(path_index) >> 32)) {}

  void begin_step(std::uint64_t step_index) {
    step_lo_ = static_cast<std::uint32_t>(step_index);
    step_hi_ = static_cast<std::uint32_t>(step_index >> 32);
    block_ = 0;
    have_spare_ = false;
  }

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const Philox::Block ctr{block_++, step_lo_, step_hi_,
                            path_ ^ path_hi_};
    const Philox::Block out = Philox::generate(key_, ctr);
    const double u1 = to_open_unit(out[0], out[1]);
    const double u2 = to_open_unit(out[2], out[3]);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  // 53-bit mantissa in (0, 1); never returns 0, so log() is safe.
  static double to_open_unit(std::uint32_t a, std::uint32_t b) {
    const std::uint64_t bits =
        (static_cast<std::uint64_t>(a) << 32 | b) >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t key_;
  std::uint32_t path_;
  std::uint32_t path_hi_;
  std::uint32_t step_lo_ = 0;
  std::uint32_t step_hi_ = 0;
  std::uint32_t block_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace perpetua
