// Copyright 2026 The aqsim Authors
// SPDX-License-Identifier: Apache-2.0
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

#include <cmath>
#include <cstdint>
#include <map>

namespace aqsim {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Deterministic pseudo-random stream (xoshiro256**). All distributions are
/// derived from the raw 64-bit output in-library so a given seed produces the
/// same draw sequence on every platform.
class RngStream {
 public:
  RngStream() : RngStream(0) {}

  explicit RngStream(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64_next(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t uniform_below(std::uint64_t bound) {
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t threshold = -bound % bound;
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return uniform() < p;
  }

  /// Normal deviate via Box-Muller; the spare value is cached.
  double gaussian(double mean, double sigma) {
    if (has_spare_) {
      has_spare_ = false;
      return mean + sigma * spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return mean + sigma * radius * std::cos(angle);
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4] = {};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Stream identity: every randomness consumer owns a stable 64-bit key so that
// adding or removing one entity never perturbs another entity's draws.
enum class StreamDomain : std::uint64_t {
  kNode = 1,
  kLink = 2,
  kSerial = 3,
  kGateway = 4,
  kCloud = 5,
  kScenario = 6,
};

constexpr std::uint64_t stream_key(StreamDomain domain, std::uint32_t a = 0,
                                   std::uint32_t b = 0) {
  return (static_cast<std::uint64_t>(domain) << 56) |
         (static_cast<std::uint64_t>(a) << 24) | static_cast<std::uint64_t>(b);
}

/// Lazily materialized per-entity streams, all derived from one master seed.
class RngPool {
 public:
  explicit RngPool(std::uint64_t master_seed) : master_(master_seed) {}

  std::uint64_t master_seed() const { return master_; }

  RngStream& stream(std::uint64_t key) {
    auto it = streams_.find(key);
    if (it == streams_.end()) {
      it = streams_.emplace(key, RngStream(derive(master_, key))).first;
    }
    return it->second;
  }

  static std::uint64_t derive(std::uint64_t master, std::uint64_t key) {
    std::uint64_t sm = master ^ (key * 0xD1B54A32D192ED03ull);
    splitmix64_next(sm);
    return splitmix64_next(sm);
  }

 private:
  std::uint64_t master_;
  std::map<std::uint64_t, RngStream> streams_;
};

}  // namespace aqsim
