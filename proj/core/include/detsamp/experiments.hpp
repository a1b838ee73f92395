// Copyright 2026 The detsamp Authors
// SPDX-License-Identifier: Apache-2.0

/**
 * @file experiments.hpp
 * @brief Experiment drivers shared by the CLI and the acceptance suite.
 *
 * Trials fan out over worker threads (capped by DETSAMP_THREADS). Each trial
 * owns an RngStream derived from (seed, trial index) and a private ledger;
 * results are reduced in trial order so output does not depend on the
 * worker count.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "detsamp/flop_ledger.hpp"
#include "detsamp/matrix.hpp"
#include "detsamp/physics.hpp"

namespace detsamp {

enum class Algorithm { Ffs, Hkpv, Markov };

[[nodiscard]] std::string_view to_string(Algorithm a) noexcept;
/// Throws InvalidInput on an unknown name.
[[nodiscard]] Algorithm parse_algorithm(std::string_view name);

/// Worker count: DETSAMP_THREADS if set, else hardware concurrency.
[[nodiscard]] std::size_t worker_count();

/// Calls fn(i) for i in [0, count) across worker threads. The first
/// exception thrown (lowest index) is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

// --- FLOP benchmark --------------------------------------------------------

struct BenchRow {
  std::size_t particles = 0;
  Algorithm algorithm = Algorithm::Ffs;
  FlopLedger ledger;
};

/// One ledger-measured sample per (N, algorithm) on a random orbital matrix
/// with `sites` rows. Markov rows measure one sweep of N proposals. Sorted
/// by (algorithm, N).
[[nodiscard]] std::vector<BenchRow> bench_flops(std::size_t sites,
                                                const std::vector<std::size_t>& particles,
                                                const std::vector<Algorithm>& algorithms,
                                                std::uint64_t seed);

[[nodiscard]] std::string bench_rows_to_csv(const std::vector<BenchRow>& rows);

// --- Double well -------------------------------------------------------------

struct DoubleWellOptions {
  DoubleWellParams model;
  std::vector<double> c_values;
  std::size_t particles = 4;
  std::size_t trials = 1000;
  std::size_t samples_per_trial = 100;
  std::size_t burn_in = 2000;
  /// Markov steps between recorded samples; 0 selects one sweep (N steps).
  std::size_t markov_thin = 1;
  /// Length of the single long stream used for autocorrelation estimates.
  std::size_t acf_length = 10000;
  std::vector<Algorithm> algorithms{Algorithm::Ffs, Algorithm::Markov};
  std::uint64_t seed = 1;
};

struct AlgorithmSummary {
  Algorithm algorithm = Algorithm::Ffs;
  double mean_imbalance = 0.0;
  double imbalance_stderr = 0.0;
  /// RMS over trials of the error of the left-well particle count.
  double rms_error = 0.0;
  std::optional<double> tau_sum;
  std::optional<double> tau_logfit;
  FlopLedger ledger;
};

struct DoubleWellPoint {
  double c = 0.0;
  double exact_imbalance = 0.0;
  double exact_left_count = 0.0;
  /// Left-well weight of the highest occupied orbital.
  double bernoulli_p = 0.0;
  double bernoulli_error = 0.0;
  std::vector<AlgorithmSummary> algorithms;
  std::optional<double> eta;  ///< markov rms / ffs rms
  std::optional<std::string> failure;
};

[[nodiscard]] std::vector<DoubleWellPoint> run_double_well(const DoubleWellOptions& opts);

// --- Anderson(-Hubbard) -------------------------------------------------------

struct AndersonOptions {
  std::size_t lx = 4;
  std::size_t ly = 4;
  double t = 1.0;
  std::size_t n_up = 4;
  std::size_t n_dn = 4;
  std::vector<double> w_values;
  std::vector<double> v_values{0.0};
  std::size_t realizations = 10;
  std::size_t trials = 1000;
  std::size_t samples_per_trial = 100;
  std::size_t burn_in = 2000;
  /// Markov steps between recorded samples; 0 selects one sweep (Nup + Ndn steps).
  std::size_t markov_thin = 1;
  std::size_t reference_samples = 100000;
  std::size_t acf_length = 10000;
  /// Flattened index of the measured site.
  std::size_t site = 0;
  std::uint64_t seed = 1;
};

struct AndersonPoint {
  double w = 0.0;
  double v = 0.0;
  std::size_t realization = 0;
  double reference = 0.0;
  double ffs_mean = 0.0;
  double ffs_error = 0.0;
  double markov_mean = 0.0;
  double markov_error = 0.0;
  std::optional<double> tau_sum;
  std::optional<double> tau_logfit;
  std::optional<double> eta;
  FlopLedger ffs_ledger;
  FlopLedger markov_ledger;
  std::optional<std::string> failure;
};

/// Disorder realization r uses the same unit pattern at every W (site
/// energies W * xi_i), so W sweeps compare like with like.
[[nodiscard]] std::vector<AndersonPoint> run_anderson(const AndersonOptions& opts);

}  // namespace detsamp
