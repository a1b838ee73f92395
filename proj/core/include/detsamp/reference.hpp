// Copyright 2026 The detsamp Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file reference.hpp
 * @brief Baseline samplers: the chain-rule (modified HKPV) projection DPP
 * sampler and a Metropolis chain over N-site configurations.
 */

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "detsamp/config.hpp"
#include "detsamp/flop_ledger.hpp"
#include "detsamp/matrix.hpp"
#include "detsamp/rng.hpp"

namespace detsamp {

/**
 * Chain-rule sampler on K = U U^T without forming K. Residual
 * r(x) = |u_x|^2 - sum_i (u_x . q_i)^2 is kept per site, where q_i are the
 * Gram-Schmidt orthonormalized rows of the sites picked so far. Each step
 * costs about 2 L N operations.
 */
[[nodiscard]] SampleConfig hkpv_sample(const OrbitalMatrix& u, RngStream& rng, FlopLedger& ledger);

/// Residual hook for tests: called with (step, residuals) before each draw.
using HkpvObserver = std::function<void(std::size_t, std::span<const double>)>;
[[nodiscard]] SampleConfig hkpv_sample(const OrbitalMatrix& u, RngStream& rng, FlopLedger& ledger,
                                       const HkpvObserver& observer);

/**
 * Inverse of a square matrix kept current under single-row replacement.
 *
 * ratio() gives det(A') / det(A) for A' = A with one row replaced, by the
 * matrix-determinant lemma. replace_row() applies Sherman-Morrison, falling
 * back to direct inversion when |ratio| < kIllConditioned and every
 * kRefreshInterval accepted updates.
 *
 * While A itself is nearly singular (condition number ||A|| ||A^{-1}|| in the
 * max-row-sum norm above 1 / kIllConditioned, as of the last direct
 * inversion) its inverse is not trusted: ratios come from a direct
 * determinant of A' and every replacement recomputes from scratch.
 */
class InverseTracker {
 public:
  static constexpr double kIllConditioned = 1e-12;
  static constexpr std::size_t kRefreshInterval = 64;

  /// Throws IllConditioned if `a` is singular.
  explicit InverseTracker(Matrix a);

  [[nodiscard]] std::size_t size() const noexcept { return a_.rows(); }
  [[nodiscard]] const Matrix& matrix() const noexcept { return a_; }
  [[nodiscard]] const Matrix& inverse() const noexcept { return inv_; }
  [[nodiscard]] double log_abs_det() const noexcept { return log_abs_det_; }
  [[nodiscard]] int det_sign() const noexcept { return sign_; }
  [[nodiscard]] std::size_t direct_recomputations() const noexcept { return recomputations_; }
  [[nodiscard]] bool well_conditioned() const noexcept;

  [[nodiscard]] double ratio(std::size_t row, std::span<const double> new_row,
                             FlopLedger& ledger) const;

  /// `ratio` must be the value ratio() returned for this replacement.
  void replace_row(std::size_t row, std::span<const double> new_row, double ratio,
                   FlopLedger& ledger);

 private:
  void recompute();

  Matrix a_;
  Matrix inv_;
  double condition_ = 1.0;
  double log_abs_det_ = 0.0;
  int sign_ = 1;
  std::size_t since_refresh_ = 0;
  std::size_t recomputations_ = 0;
};

/**
 * Metropolis chain over one species. A move relocates one uniformly chosen
 * occupied slot to one uniformly chosen empty site, so the proposal is
 * symmetric.
 */
class SlaterChain {
 public:
  static constexpr double kSingularDet = 1e-150;
  static constexpr int kMaxRestarts = 100;

  struct Proposal {
    std::size_t slot;
    std::size_t site;
    double det_ratio;
  };

  /// Throws SingularStart if |det U_{initial}| < kSingularDet.
  SlaterChain(const OrbitalMatrix& u, SampleConfig initial);

  /// Uniformly random start, retried up to kMaxRestarts times.
  static SlaterChain random_start(const OrbitalMatrix& u, RngStream& rng);

  /// std::nullopt when every site is occupied.
  [[nodiscard]] std::optional<Proposal> propose(RngStream& rng, FlopLedger& ledger) const;
  void accept(const Proposal& p, FlopLedger& ledger);

  /// Slot order (row order of the tracked matrix), not sorted.
  [[nodiscard]] const SampleConfig& config() const noexcept { return config_; }
  [[nodiscard]] SampleConfig proposed_config(const Proposal& p) const;
  [[nodiscard]] const InverseTracker& tracker() const noexcept { return tracker_; }

 private:
  const OrbitalMatrix* u_;
  SampleConfig config_;
  std::vector<std::size_t> empty_;
  std::vector<std::size_t> empty_index_;  ///< site -> position in empty_, or npos
  InverseTracker tracker_;
};

struct MarkovOptions {
  std::size_t burn_in = 0;
  std::size_t keep = 0;
  std::size_t thin = 1;
  std::optional<SampleConfig> initial;
};

/// log J(x); an empty function means J = 1.
using LogJastrow = std::function<double(const SampleConfig&)>;
using LogJastrowSpinful = std::function<double(const SpinfulConfig&)>;

/// `keep` sorted configurations, `thin` steps apart after `burn_in` steps.
/// Acceptance is min(1, J(x')^2 |det U_x'|^2 / (J(x)^2 |det U_x|^2)).
[[nodiscard]] std::vector<SampleConfig> markov_sample_stream(const OrbitalMatrix& u,
                                                             const LogJastrow& log_jastrow,
                                                             const MarkovOptions& opts,
                                                             RngStream& rng, FlopLedger& ledger);

struct SpinfulMarkovOptions {
  std::size_t burn_in = 0;
  std::size_t keep = 0;
  std::size_t thin = 1;
};

/// Two determinant chains updated in alternation (even steps move up, odd
/// steps move down), coupled only through `log_jastrow`.
[[nodiscard]] std::vector<SpinfulConfig> markov_sample_spinful(const OrbitalMatrix& u_up,
                                                               const OrbitalMatrix& u_dn,
                                                               const LogJastrowSpinful& log_jastrow,
                                                               const SpinfulMarkovOptions& opts,
                                                               RngStream& rng, FlopLedger& ledger);

}  // namespace detsamp
