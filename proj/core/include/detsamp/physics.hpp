// Copyright 2026 The detsamp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "detsamp/config.hpp"
#include "detsamp/matrix.hpp"
#include "detsamp/rng.hpp"

namespace detsamp {

enum class LatticeKind { Chain, Square };

/// Tight-binding lattice with open boundaries. Square sites are flattened
/// row-major: site = ix * ly + iy.
struct LatticeSpec {
  LatticeKind kind = LatticeKind::Chain;
  std::size_t lx = 2;
  std::size_t ly = 1;
  double t = 1.0;
  std::vector<double> potential;
  /// Chain position of each site; empty for square lattices.
  std::vector<double> coordinates;

  [[nodiscard]] std::size_t sites() const noexcept { return lx * ly; }
};

/// H = -t (nearest-neighbour hopping) + diag(potential). Throws InvalidInput
/// if the lattice violates its invariants.
[[nodiscard]] Matrix hamiltonian(const LatticeSpec& spec);

struct DoubleWellParams {
  std::size_t sites = 64;
  double a = 4096.0;
  double b = 2.0;
  double c = 0.0;
  double t = std::numbers::pi * std::numbers::pi / 6.0;
};

/// Chain on x_i evenly spaced over [-2, 2] with v_i = a (x_i^2 - b)^2 - c x_i.
[[nodiscard]] LatticeSpec build_double_well(const DoubleWellParams& params);

struct AndersonParams {
  std::size_t lx = 4;
  std::size_t ly = 4;
  double w = 0.0;
  double t = 1.0;
};

/// Square lattice with site energies uniform on [-W, W] drawn from `rng`.
[[nodiscard]] LatticeSpec build_anderson(const AndersonParams& params, RngStream& rng);

struct GroundState {
  OrbitalMatrix orbitals;
  std::vector<double> energies;  ///< all one-body eigenvalues, ascending
};

/// The N lowest eigenvectors of the one-body Hamiltonian. Throws
/// DegenerateFilling when lambda_{N+1} - lambda_N <= gap_tolerance.
[[nodiscard]] GroundState ground_state(const LatticeSpec& spec, std::size_t particles,
                                       double gap_tolerance = 1e-10);
[[nodiscard]] OrbitalMatrix ground_state_orbitals(const LatticeSpec& spec, std::size_t particles,
                                                  double gap_tolerance = 1e-10);

/// (#positions with coordinate > 0) - (#positions with coordinate < 0).
[[nodiscard]] int well_imbalance(const SampleConfig& config, std::span<const double> coordinates);

/// Number of positions with negative coordinate.
[[nodiscard]] std::size_t left_well_count(const SampleConfig& config,
                                          std::span<const double> coordinates);

/// Weight of orbital `column` on sites with negative coordinate.
[[nodiscard]] double left_well_weight(const OrbitalMatrix& u, std::size_t column,
                                      std::span<const double> coordinates);

[[nodiscard]] std::size_t double_occupancy(const SpinfulConfig& config);

/// log J = -V D / 2 with D the number of doubly occupied sites.
[[nodiscard]] double gutzwiller_log_weight(const SpinfulConfig& config, double v);

using SpinfulObservable = std::function<double(const SpinfulConfig&)>;

/// sum J^2 O / sum J^2 over noninteracting samples, J^2 from the Gutzwiller
/// factor with a max-shift in log space. Throws AllZeroWeights or
/// InvalidInput (no samples).
[[nodiscard]] double reweighted_expectation(std::span<const SpinfulConfig> samples, double v,
                                            const SpinfulObservable& observable);

/// sqrt(p (1 - p) / M).
[[nodiscard]] double bernoulli_error(double p, double samples);

/// Parameter file record. Unknown keys are rejected on parse.
struct ModelParams {
  std::string model;  ///< "double_well" or "anderson"
  std::optional<std::size_t> sites;
  std::optional<std::size_t> lx;
  std::optional<std::size_t> ly;
  std::optional<double> a;
  std::optional<double> b;
  std::optional<double> c;
  std::optional<double> t;
  std::optional<double> w;
  std::optional<double> v;
  std::optional<std::size_t> particles;
  std::optional<std::size_t> n_up;
  std::optional<std::size_t> n_dn;
  std::optional<std::uint64_t> seed;
};

/// Parses {model, L | Lx, Ly, a, b, c, t, W, V, N, Nup, Ndn, seed}.
[[nodiscard]] ModelParams parse_model_params(std::string_view json_text);
[[nodiscard]] ModelParams load_model_params(const std::filesystem::path& path);

[[nodiscard]] DoubleWellParams to_double_well(const ModelParams& params);
[[nodiscard]] AndersonParams to_anderson(const ModelParams& params);

}  // namespace detsamp
