// Copyright 2026 The detsamp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace detsamp {

/// c(i) = 1/(n-i) sum_{k<n-i} (f_k - mu)(f_{k+i} - mu), i = 0..cutoff.
struct AcfCurve {
  std::vector<double> values;

  [[nodiscard]] std::size_t cutoff() const noexcept { return values.empty() ? 0 : values.size() - 1; }
};

/// Throws SeriesTooShort unless series.size() > cutoff.
[[nodiscard]] AcfCurve acf(std::span<const double> series, std::size_t cutoff);

/// min(n / 10, 500).
[[nodiscard]] std::size_t default_acf_cutoff(std::size_t series_length) noexcept;

/// tau = sum_{i=0}^{cutoff} c(i) / c(0). Throws ZeroVariance.
[[nodiscard]] double acl_sum(const AcfCurve& curve);

/// tau = -1 / slope of the least-squares line through ln c(i) over the
/// leading run of positive values. Throws InsufficientPositiveLags (< 3
/// points) or ZeroVariance (non-negative slope).
[[nodiscard]] double acl_logfit(const AcfCurve& curve);

struct TrialReport {
  std::vector<double> per_trial_means;
  double reference = 0.0;
  double rms_error = 0.0;
};

/// sqrt(mean (m_t - reference)^2). Throws TooFewTrials for < 2 trials.
[[nodiscard]] double trial_rms_error(std::span<const double> trial_means, double reference);
/// Reference = mean of all trial means.
[[nodiscard]] TrialReport trial_report(std::span<const double> trial_means);
[[nodiscard]] TrialReport trial_report(std::span<const double> trial_means, double reference);

/// eta = markov / ffs. Throws DivisionByZero when ffs_error is not positive.
[[nodiscard]] double error_ratio(double markov_error, double ffs_error);

// Helpers for distribution checks.

[[nodiscard]] double mean(std::span<const double> xs);
/// Unbiased sample variance.
[[nodiscard]] double variance(std::span<const double> xs);
[[nodiscard]] double standard_error(std::span<const double> xs);

/// 0.5 * sum |p_i - q_i| over normalized inputs.
[[nodiscard]] double total_variation(std::span<const double> p, std::span<const double> q);

struct ChiSquareResult {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
};

/// Goodness of fit of observed counts against probabilities. Bins with
/// expected count below 5 are pooled.
[[nodiscard]] ChiSquareResult chi_square_gof(std::span<const double> counts,
                                             std::span<const double> probabilities);

/// Homogeneity test between two count vectors over the same bins.
[[nodiscard]] ChiSquareResult chi_square_two_sample(std::span<const double> a,
                                                    std::span<const double> b);

/// One-sample Kolmogorov-Smirnov statistic and asymptotic p-value.
struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};
[[nodiscard]] KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);

[[nodiscard]] double pearson(std::span<const double> x, std::span<const double> y);
/// Pearson correlation of average ranks.
[[nodiscard]] double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace detsamp
