// Copyright 2026 The detsamp Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file ffs.hpp
 * @brief Fast fermion sampling.
 *
 * A configuration is drawn by first fixing a uniformly random column order m
 * and then placing particles one at a time. At step k the next position x is
 * drawn with weight |u_x . h|^2, where u_x is row x of U restricted to the
 * columns m_1..m_k and h is the unit vector orthogonal to the restricted rows
 * of the k-1 positions already placed. Averaging the resulting chain
 * probability over all column orders reproduces |det U_{x,n}|^2 / N!.
 *
 * h is found by back substitution through an upper-triangular row store that
 * is extended by one row per step. Rows are always reduced across all N
 * permuted columns, so extending the column window costs nothing extra.
 */

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "detsamp/config.hpp"
#include "detsamp/flop_ledger.hpp"
#include "detsamp/matrix.hpp"
#include "detsamp/rng.hpp"

namespace detsamp {

/// Bijection on {0..N-1}; order()[c] is the orbital placed in permuted column c.
class Permutation {
 public:
  explicit Permutation(std::vector<std::size_t> order);
  static Permutation identity(std::size_t n);

  [[nodiscard]] std::size_t size() const noexcept { return order_.size(); }
  std::size_t operator[](std::size_t c) const noexcept { return order_[c]; }
  [[nodiscard]] const std::vector<std::size_t>& order() const noexcept { return order_; }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<std::size_t> order_;
};

/// Fisher-Yates shuffle of {0..N-1}.
[[nodiscard]] Permutation draw_permutation(std::size_t n, RngStream& rng);

/// `row` (orbital order) reordered into permuted-column order.
[[nodiscard]] std::vector<double> permute_row(std::span<const double> row, const Permutation& perm);

/**
 * Incremental Gaussian elimination over the rows of already-placed
 * positions, in permuted column order. Row j is zero in columns < j and has
 * its pivot in column j.
 */
class EliminationState {
 public:
  static constexpr double kPivotTolerance = 1e-12;

  explicit EliminationState(Permutation perm);

  [[nodiscard]] const Permutation& permutation() const noexcept { return perm_; }
  [[nodiscard]] std::size_t width() const noexcept { return perm_.size(); }
  /// Number of reduced rows held.
  [[nodiscard]] std::size_t size() const noexcept { return count_; }

  [[nodiscard]] std::span<const double> reduced_row(std::size_t j) const noexcept {
    return {rows_.data() + j * width(), width()};
  }
  [[nodiscard]] double pivot(std::size_t j) const noexcept { return rows_[j * width() + j]; }

  /// Reduces `permuted_row` against every held row and stores it.
  /// Throws DegeneratePivot if the new pivot is below tolerance relative to
  /// the row norm, or InvalidShape if the store is full.
  void advance(std::span<const double> permuted_row, FlopLedger& ledger);

 private:
  Permutation perm_;
  std::vector<double> rows_;
  std::size_t count_ = 0;
};

/// Unit vector over permuted columns 0..size() orthogonal to every held row
/// restricted to those columns. Its free component (the last one) is
/// positive. Throws InvalidShape if the store already holds N rows.
[[nodiscard]] std::vector<double> normal_vector(const EliminationState& state, FlopLedger& ledger);

/// Per-site conditional weights with their running sum.
struct ConditionalWeights {
  static constexpr double kNormalizationTolerance = 1e-6;

  std::vector<double> weight;      ///< zero at already-chosen sites
  std::vector<double> cumulative;  ///< cumulative[x] = sum of weight[0..x]

  [[nodiscard]] double total() const noexcept { return cumulative.empty() ? 0.0 : cumulative.back(); }
};

/**
 * weight[x] = (sum_c U(x, perm[c]) h[c])^2 for c < h.size(), forced to zero
 * for x in `chosen`. Throws NormalizationLoss if the total departs from 1 by
 * more than kNormalizationTolerance.
 */
[[nodiscard]] ConditionalWeights conditional_weights(const OrbitalMatrix& u, const Permutation& perm,
                                                     std::span<const double> h,
                                                     std::span<const std::size_t> chosen,
                                                     FlopLedger& ledger);

/// Inverse-CDF draw: first site whose cumulative weight reaches u * total,
/// with u uniform on (0, 1].
[[nodiscard]] std::size_t draw_site(const ConditionalWeights& weights, RngStream& rng,
                                    FlopLedger& ledger);

struct FfsOptions {
  /// Extra whole-sample attempts after a DegeneratePivot.
  int max_retries = 3;
};

/// One N-particle configuration, in draw order.
[[nodiscard]] SampleConfig ffs_sample(const OrbitalMatrix& u, RngStream& rng, FlopLedger& ledger,
                                      const FfsOptions& opts = {});

/// First `n_sub` positions of an FFS draw: a sample of the n_sub-particle
/// marginal. Cost is independent of L * N.
[[nodiscard]] SampleConfig ffs_marginal_sample(const OrbitalMatrix& u, std::size_t n_sub,
                                               RngStream& rng, FlopLedger& ledger,
                                               const FfsOptions& opts = {});

/// Same as ffs_sample but with a caller-fixed column order.
[[nodiscard]] SampleConfig ffs_sample_with_permutation(const OrbitalMatrix& u, std::size_t steps,
                                                       const Permutation& perm, RngStream& rng,
                                                       FlopLedger& ledger);

// ---------------------------------------------------------------------------
// Conditional Metropolis variants: the explicit per-step draw is replaced by a
// short single-variable Metropolis chain, so cost no longer scales with L.

struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  [[nodiscard]] double extent() const noexcept { return hi - lo; }
  [[nodiscard]] bool contains(double x) const noexcept { return x > lo && x < hi; }
};

/// Writes the N orbital values at position x into `out`.
using OrbitalFunction = std::function<void(double x, std::span<double> out)>;

struct ConditionalMetropolisOptions {
  static constexpr double kZeroWeight = 1e-300;
  static constexpr int kMaxInitAttempts = 100;

  std::size_t m_cond = 200;
  /// Half-width of the uniform proposal; <= 0 selects 10% of the domain extent.
  double proposal_width = 0.0;
  int max_retries = 3;
};

/// Continuous-space sample of `particles` positions in `domain`.
/// Throws ZeroWeightStart when no initial position with nonzero weight is found.
[[nodiscard]] std::vector<double> ffs_sample_continuous(const OrbitalFunction& orbitals,
                                                        std::size_t particles, Interval domain,
                                                        const ConditionalMetropolisOptions& opts,
                                                        RngStream& rng, FlopLedger& ledger);

/// Lattice sample whose per-step draw uses independent uniform site
/// proposals instead of scanning all L sites.
[[nodiscard]] SampleConfig ffs_sample_discrete_metropolis(const OrbitalMatrix& u,
                                                          const ConditionalMetropolisOptions& opts,
                                                          RngStream& rng, FlopLedger& ledger);

}  // namespace detsamp
