// Copyright 2026 The robustsel Authors.
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


#ifndef ROBUSTSEL_RNG_HPP_
#define ROBUSTSEL_RNG_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace robustsel {

inline constexpr std::string_view kRngAlgorithm = "splitmix64-counter/v1";

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Key of an independent substream `stream` of `key`.
constexpr std::uint64_t derive_seed(std::uint64_t key, std::uint64_t stream) noexcept {
  return mix64(key ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

// Counter-based generator: draw i is mix64(key + (i + 1) * golden). Any draw
// can be reproduced from (key, i) alone, and substreams come from derive_seed.
// Distributions below are implemented here rather than taken from <random> so
// that outputs are identical across standard libraries.
class CounterRng {
 public:
  using result_type = std::uint64_t;
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  explicit CounterRng(std::uint64_t key, std::uint64_t counter = 0) noexcept : key_(key), counter_(counter) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
  }

  CounterRng substream(std::uint64_t stream) const noexcept { return CounterRng(derive_seed(key_, stream)); }
  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

// Uniform on [0, 1) with 53 random bits.
inline double uniform01(CounterRng& rng) noexcept {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_real(CounterRng& rng, double lo, double hi) noexcept {
  return lo + (hi - lo) * uniform01(rng);
}

// Uniform on {0, ..., bound-1}; bound must be positive. Lemire's method.
inline std::uint64_t uniform_index(CounterRng& rng, std::uint64_t bound) noexcept {
  unsigned __int128 m = static_cast<unsigned __int128>(rng()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(rng()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

inline bool bernoulli_half(CounterRng& rng) noexcept { return (rng() >> 63) != 0; }

// Box-Muller; one normal per two uniforms.
inline double standard_normal(CounterRng& rng) noexcept {
  const double u1 = 1.0 - uniform01(rng);  // (0, 1]
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// `count` distinct elements of `pool`, in draw order (partial Fisher-Yates).
template <typename T>
std::vector<T> sample_without_replacement(CounterRng& rng, std::span<const T> pool, std::size_t count) {
  std::vector<T> scratch(pool.begin(), pool.end());
  if (count > scratch.size()) count = scratch.size();
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t j = i + uniform_index(rng, scratch.size() - i);
    std::swap(scratch[i], scratch[j]);
  }
  scratch.resize(count);
  return scratch;
}

}  // namespace robustsel

#endif  // ROBUSTSEL_RNG_HPP_
