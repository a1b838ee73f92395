// Copyright 2026 The detsamp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <limits>

namespace detsamp {

/**
 * Counter-based 64-bit generator (SplitMix64 output function over a
 * seed-keyed counter). Satisfies UniformRandomBitGenerator, so standard
 * distributions work on it.
 *
 * Substreams are obtained with derive(), which hashes (seed, index) into a
 * fresh key. Output is reproducible within one build; no cross-platform
 * bit-compatibility is promised for the std distributions layered on top.
 */
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit constexpr RngStream(std::uint64_t seed) noexcept : seed_(seed), key_(mix(seed)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    ++counter_;
    return mix(key_ + counter_ * kGolden);
  }

  /// Independent stream for `index`; does not advance this stream.
  [[nodiscard]] constexpr RngStream derive(std::uint64_t index) const noexcept {
    return RngStream(derive_seed(seed_, index));
  }

  [[nodiscard]] static constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                                           std::uint64_t index) noexcept {
    return mix(seed ^ mix(index + 0x632be59bd9b4e019ULL));
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform double in (0, 1].
  double uniform_open_closed() noexcept { return 1.0 - uniform(); }

  /// Unbiased uniform integer in [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n) noexcept;

  double normal() noexcept;

  [[nodiscard]] constexpr std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] constexpr std::uint64_t counter() const noexcept { return counter_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace detsamp
