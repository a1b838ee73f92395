// Copyright 2026 The detsamp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "detsamp/flop_ledger.hpp"
#include "detsamp/linalg.hpp"
#include "detsamp/matrix.hpp"
#include "detsamp/rng.hpp"

namespace detsamp {

using FeatureVector = std::vector<double>;

/// Symmetric positive semidefinite L-ensemble kernel.
class Kernel {
 public:
  static constexpr double kSymmetryTolerance = 1e-10;
  static constexpr double kNegativeClamp = 1e-8;

  /// Throws NotSymmetric / InvalidShape.
  explicit Kernel(Matrix c);

  [[nodiscard]] std::size_t size() const noexcept { return c_.rows(); }
  [[nodiscard]] const Matrix& matrix() const noexcept { return c_; }

 private:
  Matrix c_;
};

/// Gram matrix C_ij = b_i . b_j. Throws DimensionMismatch / InvalidInput.
[[nodiscard]] Kernel kernel_from_vectors(const std::vector<FeatureVector>& vectors);

/**
 * Eigenvector-selection sampler for P(S) proportional to det(C_S).
 *
 * The spectrum is computed once (setup, not charged to ledgers). Eigenvalues
 * in (-kNegativeClamp, 0) are clamped to zero; lower ones throw
 * NegativeEigenvalue.
 */
class DppSampler {
 public:
  explicit DppSampler(const Kernel& kernel);

  /// Eigenvalues in descending order after clamping.
  [[nodiscard]] const std::vector<double>& eigenvalues() const noexcept { return values_; }
  [[nodiscard]] double expected_size() const noexcept;

  /// Sorted subset of 0-based items.
  [[nodiscard]] std::vector<std::size_t> sample(RngStream& rng, FlopLedger& ledger) const;

 private:
  std::vector<double> values_;
  Matrix vectors_;  ///< columns match values_
};

[[nodiscard]] std::vector<std::size_t> sample_dpp(const Kernel& kernel, RngStream& rng,
                                                  FlopLedger& ledger);

/// Index maximizing (1/M) sum_j v_i . v_j; lowest index on ties.
/// Throws EmptyCandidates, InvalidInput (non-unit vectors) or DimensionMismatch.
[[nodiscard]] std::size_t mbr_select(const std::vector<FeatureVector>& candidates);

/// Normalized mean of the chosen items' vectors, or empty if it vanishes.
[[nodiscard]] FeatureVector subset_representative(const std::vector<FeatureVector>& items,
                                                  const std::vector<std::size_t>& subset);

/// b_i with b_i . b_j = C_ij, recovered from the spectrum of C.
[[nodiscard]] std::vector<FeatureVector> vectors_from_kernel(const Kernel& kernel);

/// Synthetic item vectors standing in for sentence embeddings: unit
/// directions pulled towards one of `clusters` shared centres by
/// `similarity` in [0, 1], scaled by exp(magnitude_spread * z).
struct SyntheticSpec {
  std::size_t items = 100;
  std::size_t dimension = 16;
  std::size_t clusters = 4;
  double similarity = 0.5;
  double magnitude_spread = 0.3;
  double magnitude_scale = 1.0;
};

[[nodiscard]] std::vector<FeatureVector> synthetic_vectors(const SyntheticSpec& spec,
                                                           RngStream& rng);

}  // namespace detsamp
