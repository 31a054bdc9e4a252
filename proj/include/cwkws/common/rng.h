// include/cwkws/common/rng.h

// Copyright 2026  The cwkws Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef CWKWS_COMMON_RNG_H_
#define CWKWS_COMMON_RNG_H_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace cwkws {

/// Seeded random stream used everywhere randomness enters the toolkit.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard distributions are not (their algorithms are
/// implementation-defined), so every derived draw is computed here:
///   - Uniform01: top 53 bits of one engine output, scaled to [0, 1).
///   - UniformIndex: Lemire's multiply-shift with rejection, unbiased.
///   - Normal: Box-Muller; both values of a pair are used.
/// An Rng instance is owned by one caller at a time.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Independent stream keyed by a base seed and a path of integer ids, e.g.
  /// Derive(seed, {epoch, sample_index}). Mixing uses SplitMix64.
  static Rng Derive(std::uint64_t seed, std::initializer_list<std::uint64_t> ids);

  std::uint64_t NextU64() { return engine_(); }

  /// Uniform in [0, 1).
  double Uniform01();

  /// Uniform in [lo, hi).
  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }

  /// Uniform integer in [0, n). n must be positive.
  std::size_t UniformIndex(std::size_t n);

  /// Uniform integer in [lo, hi] inclusive.
  std::int64_t UniformInt(std::int64_t lo, std::int64_t hi);

  /// Standard normal draw.
  double Normal();

  double Normal(double mean, double stddev) { return mean + stddev * Normal(); }

  template <typename RandomIt>
  void Shuffle(RandomIt first, RandomIt last) {
    auto n = static_cast<std::size_t>(last - first);
    for (std::size_t i = n; i > 1; --i) {
      std::size_t j = UniformIndex(i);
      std::swap(first[i - 1], first[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t SplitMix64(std::uint64_t x);

}  // namespace cwkws

#endif  // CWKWS_COMMON_RNG_H_
