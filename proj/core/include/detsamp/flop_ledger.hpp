// Copyright 2026 The detsamp Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file flop_ledger.hpp
 * @brief Scalar operation counting for sampler inner loops.
 *
 * A ledger counts multiplies and additions separately. Divisions and square
 * roots are booked as one multiply; subtractions as one addition. Comparisons,
 * copies and random draws are free. Setup work (eigendecomposition, file
 * loading) is never charged to a ledger.
 */

#pragma once

#include <cstdint>
#include <span>
#include <utility>

namespace detsamp {

class FlopLedger {
 public:
  constexpr FlopLedger() = default;
  constexpr FlopLedger(std::uint64_t multiplies, std::uint64_t additions)
      : multiplies_(multiplies), additions_(additions) {}

  constexpr void mul(std::uint64_t n = 1) noexcept { multiplies_ += n; }
  constexpr void add(std::uint64_t n = 1) noexcept { additions_ += n; }

  [[nodiscard]] constexpr std::uint64_t multiplies() const noexcept { return multiplies_; }
  [[nodiscard]] constexpr std::uint64_t additions() const noexcept { return additions_; }
  [[nodiscard]] constexpr std::uint64_t total() const noexcept { return multiplies_ + additions_; }

  /// Folds another (private, per-worker) ledger into this one.
  constexpr FlopLedger& operator+=(const FlopLedger& other) noexcept {
    multiplies_ += other.multiplies_;
    additions_ += other.additions_;
    return *this;
  }

  /// Counts accumulated since `earlier`, which must be a prior snapshot.
  [[nodiscard]] constexpr FlopLedger since(const FlopLedger& earlier) const noexcept {
    return {multiplies_ - earlier.multiplies_, additions_ - earlier.additions_};
  }

  constexpr bool operator==(const FlopLedger&) const = default;

 private:
  std::uint64_t multiplies_ = 0;
  std::uint64_t additions_ = 0;
};

/// Inner product charging k multiplies and k-1 additions.
[[nodiscard]] inline double dot(std::span<const double> a, std::span<const double> b,
                                FlopLedger& ledger) noexcept {
  double s = 0.0;
  const std::size_t k = a.size() < b.size() ? a.size() : b.size();
  if (k == 0) return s;
  s = a[0] * b[0];
  for (std::size_t i = 1; i < k; ++i) s += a[i] * b[i];
  ledger.mul(k);
  ledger.add(k - 1);
  return s;
}

template <class T>
struct LedgeredResult {
  T value;
  FlopLedger delta;
};

/// Runs `fn(ledger)` and reports the counts it added alongside its result.
template <class Fn>
auto ledger_scoped_run(FlopLedger& ledger, Fn&& fn) {
  const FlopLedger before = ledger;
  using R = decltype(std::forward<Fn>(fn)(ledger));
  if constexpr (std::is_void_v<R>) {
    std::forward<Fn>(fn)(ledger);
    return ledger.since(before);
  } else {
    R value = std::forward<Fn>(fn)(ledger);
    return LedgeredResult<R>{std::move(value), ledger.since(before)};
  }
}

}  // namespace detsamp
