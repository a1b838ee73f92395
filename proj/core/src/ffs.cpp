// Copyright 2026 The detsamp Authors
// SPDX-License-Identifier: Apache-2.0

#include "detsamp/ffs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "detsamp/error.hpp"

namespace detsamp {

Permutation::Permutation(std::vector<std::size_t> order) : order_(std::move(order)) {
  std::vector<bool> seen(order_.size(), false);
  for (const auto c : order_) {
    if (c >= order_.size() || seen[c]) throw Error(ErrorCode::InvalidInput, "not a permutation");
    seen[c] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  return Permutation(std::move(order));
}

Permutation draw_permutation(std::size_t n, RngStream& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_index(i));
    std::swap(order[i - 1], order[j]);
  }
  return Permutation(std::move(order));
}

std::vector<double> permute_row(std::span<const double> row, const Permutation& perm) {
  std::vector<double> out(perm.size());
  for (std::size_t c = 0; c < perm.size(); ++c) out[c] = row[perm[c]];
  return out;
}

EliminationState::EliminationState(Permutation perm)
    : perm_(std::move(perm)), rows_(perm_.size() * perm_.size(), 0.0) {}

void EliminationState::advance(std::span<const double> permuted_row, FlopLedger& ledger) {
  const std::size_t n = width();
  if (count_ >= n) throw Error(ErrorCode::InvalidShape, "elimination store is full");
  if (permuted_row.size() != n) throw Error(ErrorCode::DimensionMismatch, "row length != N");

  const std::size_t j = count_;
  double* r = rows_.data() + j * n;
  std::copy(permuted_row.begin(), permuted_row.end(), r);
  const double norm = std::sqrt(dot(permuted_row, permuted_row, ledger));
  ledger.mul();

  for (std::size_t i = 0; i < j; ++i) {
    const double* ri = rows_.data() + i * n;
    const double f = r[i] / ri[i];
    r[i] = 0.0;
    for (std::size_t c = i + 1; c < n; ++c) r[c] -= f * ri[c];
    ledger.mul(1 + (n - i - 1));
    ledger.add(n - i - 1);
  }
  if (!(std::abs(r[j]) > kPivotTolerance * norm)) {
    std::fill(r, r + n, 0.0);
    throw Error(ErrorCode::DegeneratePivot,
                "pivot " + std::to_string(j) + " vanished; selected rows are dependent");
  }
  ++count_;
}

std::vector<double> normal_vector(const EliminationState& state, FlopLedger& ledger) {
  const std::size_t k = state.size() + 1;
  if (k > state.width()) throw Error(ErrorCode::InvalidShape, "no free column left");
  std::vector<double> h(k, 0.0);
  h[k - 1] = 1.0;
  if (k == 1) return h;

  // Back substitution with the free component fixed at column k-1.
  for (std::size_t j = k - 1; j-- > 0;) {
    const auto row = state.reduced_row(j);
    double s = row[k - 1] * h[k - 1];
    for (std::size_t c = j + 1; c + 1 < k; ++c) s += row[c] * h[c];
    ledger.mul(k - 1 - j);
    ledger.add(k - 2 - j);
    if (row[j] == 0.0) throw Error(ErrorCode::DegeneratePivot, "zero pivot in back substitution");
    h[j] = -s / row[j];
    ledger.mul();
  }
  const double norm = std::sqrt(dot(h, h, ledger));
  const double inv = 1.0 / norm;
  for (double& v : h) v *= inv;
  ledger.mul(2 + k);
  return h;
}

ConditionalWeights conditional_weights(const OrbitalMatrix& u, const Permutation& perm,
                                       std::span<const double> h,
                                       std::span<const std::size_t> chosen, FlopLedger& ledger) {
  const std::size_t sites = u.sites();
  const std::size_t k = h.size();
  if (perm.size() != u.particles()) throw Error(ErrorCode::DimensionMismatch, "permutation size != N");
  if (k == 0 || k > perm.size()) throw Error(ErrorCode::InvalidShape, "normal vector length");

  std::vector<bool> taken(sites, false);
  for (const auto x : chosen) {
    if (x >= sites) throw Error(ErrorCode::InvalidInput, "chosen site out of range");
    taken[x] = true;
  }

  // The k = 1 normal vector is exactly (1): the projection is the entry itself.
  const bool unit_scalar = (k == 1 && h[0] == 1.0);

  ConditionalWeights out{std::vector<double>(sites, 0.0), std::vector<double>(sites, 0.0)};
  double running = 0.0;
  std::size_t free_sites = 0;
  for (std::size_t x = 0; x < sites; ++x) {
    if (!taken[x]) {
      const auto row = u.row(x);
      double proj;
      if (unit_scalar) {
        proj = row[perm[0]];
      } else {
        proj = row[perm[0]] * h[0];
        for (std::size_t c = 1; c < k; ++c) proj += row[perm[c]] * h[c];
        ledger.mul(k);
        ledger.add(k - 1);
      }
      const double w = proj * proj;
      ledger.mul();
      out.weight[x] = w;
      running = free_sites == 0 ? w : running + w;
      ++free_sites;
    }
    out.cumulative[x] = running;
  }
  if (free_sites > 1) ledger.add(free_sites - 1);

  if (!(std::abs(running - 1.0) <= ConditionalWeights::kNormalizationTolerance)) {
    throw Error(ErrorCode::NormalizationLoss,
                "conditional weights sum to " + std::to_string(running) + " at step " + std::to_string(k));
  }
  return out;
}

std::size_t draw_site(const ConditionalWeights& weights, RngStream& rng, FlopLedger& ledger) {
  const double target = rng.uniform_open_closed() * weights.total();
  ledger.mul();
  const auto& cum = weights.cumulative;
  auto it = std::lower_bound(cum.begin(), cum.end(), target);
  if (it == cum.end()) {
    // Only reachable through rounding in the running sum.
    std::size_t x = cum.size();
    while (x-- > 0)
      if (weights.weight[x] > 0.0) return x;
    throw Error(ErrorCode::NormalizationLoss, "all weights are zero");
  }
  return static_cast<std::size_t>(it - cum.begin());
}

SampleConfig ffs_sample_with_permutation(const OrbitalMatrix& u, std::size_t steps,
                                         const Permutation& perm, RngStream& rng,
                                         FlopLedger& ledger) {
  if (steps > u.particles()) throw Error(ErrorCode::InvalidInput, "more steps than particles");
  EliminationState state(perm);
  SampleConfig chosen;
  chosen.reserve(steps);
  for (std::size_t k = 1; k <= steps; ++k) {
    const auto h = normal_vector(state, ledger);
    const auto weights = conditional_weights(u, perm, h, chosen, ledger);
    const auto x = draw_site(weights, rng, ledger);
    chosen.push_back(x);
    if (k < steps) state.advance(permute_row(u.row(x), perm), ledger);
  }
  return chosen;
}

namespace {

template <class Attempt>
auto with_retries(int max_retries, Attempt&& attempt) {
  for (int i = 0;; ++i) {
    try {
      return attempt();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegeneratePivot) throw;
      if (i >= max_retries) {
        throw Error(ErrorCode::SamplingFailed,
                    "degenerate pivot persisted over " + std::to_string(i + 1) + " attempts");
      }
    }
  }
}

}  // namespace

SampleConfig ffs_sample(const OrbitalMatrix& u, RngStream& rng, FlopLedger& ledger,
                        const FfsOptions& opts) {
  return ffs_marginal_sample(u, u.particles(), rng, ledger, opts);
}

SampleConfig ffs_marginal_sample(const OrbitalMatrix& u, std::size_t n_sub, RngStream& rng,
                                 FlopLedger& ledger, const FfsOptions& opts) {
  if (n_sub == 0 || n_sub > u.particles()) {
    throw Error(ErrorCode::InvalidInput, "marginal size must be in [1, N]");
  }
  return with_retries(opts.max_retries, [&] {
    const auto perm = draw_permutation(u.particles(), rng);
    return ffs_sample_with_permutation(u, n_sub, perm, rng, ledger);
  });
}

namespace {

// Shared driver for the conditional-Metropolis variants. `load_row(pos, out)`
// writes the N orbital values at pos and returns false where the density is
// forced to zero (outside the domain, or an occupied site); `fix(pos)` is
// called once a position is final.
template <class Pos, class LoadRow, class Init, class Propose, class Fix>
std::vector<Pos> conditional_metropolis(std::size_t n, const LoadRow& load_row, const Init& init,
                                        const Propose& propose, const Fix& fix,
                                        const ConditionalMetropolisOptions& opts, RngStream& rng,
                                        FlopLedger& ledger) {
  const auto perm = draw_permutation(n, rng);
  EliminationState state(perm);
  std::vector<Pos> positions;
  positions.reserve(n);
  std::vector<double> row(n);

  for (std::size_t k = 1; k <= n; ++k) {
    const auto h = normal_vector(state, ledger);
    const bool unit_scalar = (k == 1);
    auto weight_at = [&](const Pos& p) -> double {
      if (!load_row(p, std::span<double>(row))) return 0.0;
      double proj = row[perm[0]];
      if (!unit_scalar) {
        proj *= h[0];
        for (std::size_t c = 1; c < k; ++c) proj += row[perm[c]] * h[c];
        ledger.mul(k);
        ledger.add(k - 1);
      }
      ledger.mul();
      return proj * proj;
    };

    Pos x{};
    double w = 0.0;
    for (int attempt = 0; attempt < ConditionalMetropolisOptions::kMaxInitAttempts; ++attempt) {
      x = init(rng);
      w = weight_at(x);
      if (w >= ConditionalMetropolisOptions::kZeroWeight) break;
    }
    if (w < ConditionalMetropolisOptions::kZeroWeight) {
      throw Error(ErrorCode::ZeroWeightStart,
                  "no start with nonzero weight at step " + std::to_string(k));
    }

    for (std::size_t m = 0; m < opts.m_cond; ++m) {
      const Pos candidate = propose(x, rng);
      const double wc = weight_at(candidate);
      if (wc <= 0.0) continue;
      const double ratio = wc / w;
      ledger.mul();
      if (ratio >= 1.0 || rng.uniform() < ratio) {
        x = candidate;
        w = wc;
      }
    }
    positions.push_back(x);
    if (k < n) {
      load_row(x, std::span<double>(row));
      state.advance(permute_row(row, perm), ledger);
    }
    fix(x);
  }
  return positions;
}

void check_metropolis_options(const ConditionalMetropolisOptions& opts) {
  if (opts.m_cond == 0) throw Error(ErrorCode::InvalidInput, "m_cond must be >= 1");
}

}  // namespace

std::vector<double> ffs_sample_continuous(const OrbitalFunction& orbitals, std::size_t particles,
                                          Interval domain, const ConditionalMetropolisOptions& opts,
                                          RngStream& rng, FlopLedger& ledger) {
  check_metropolis_options(opts);
  if (particles == 0) throw Error(ErrorCode::InvalidInput, "need at least one particle");
  if (!(domain.extent() > 0.0)) throw Error(ErrorCode::InvalidInput, "empty domain");
  const double width = opts.proposal_width > 0.0 ? opts.proposal_width : 0.1 * domain.extent();

  auto load_row = [&](double x, std::span<double> out) {
    if (!domain.contains(x)) return false;
    orbitals(x, out);
    return true;
  };
  auto init = [&](RngStream& r) { return domain.lo + domain.extent() * r.uniform(); };
  auto propose = [&](double x, RngStream& r) { return x + width * (2.0 * r.uniform() - 1.0); };

  return with_retries(opts.max_retries, [&] {
    return conditional_metropolis<double>(particles, load_row, init, propose, [](double) {}, opts,
                                          rng, ledger);
  });
}

SampleConfig ffs_sample_discrete_metropolis(const OrbitalMatrix& u,
                                            const ConditionalMetropolisOptions& opts,
                                            RngStream& rng, FlopLedger& ledger) {
  check_metropolis_options(opts);
  const std::size_t sites = u.sites();
  std::vector<bool> taken(sites, false);
  auto load_row = [&](std::size_t x, std::span<double> out) {
    if (taken[x]) return false;
    const auto row = u.row(x);
    std::copy(row.begin(), row.end(), out.begin());
    return true;
  };
  auto draw = [&](RngStream& r) { return static_cast<std::size_t>(r.uniform_index(sites)); };
  auto propose = [&](std::size_t, RngStream& r) { return draw(r); };
  auto fix = [&](std::size_t x) { taken[x] = true; };

  return with_retries(opts.max_retries, [&] {
    std::fill(taken.begin(), taken.end(), false);
    return conditional_metropolis<std::size_t>(u.particles(), load_row, draw, propose, fix, opts,
                                               rng, ledger);
  });
}

}  // namespace detsamp
