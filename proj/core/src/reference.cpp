// Copyright 2026 The detsamp Authors
// SPDX-License-Identifier: Apache-2.0

#include "detsamp/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "detsamp/error.hpp"
#include "detsamp/linalg.hpp"

namespace detsamp {

namespace {

constexpr double kResidualClamp = -1e-8;
constexpr double kTraceTolerance = 1e-6;

}  // namespace

SampleConfig hkpv_sample(const OrbitalMatrix& u, RngStream& rng, FlopLedger& ledger) {
  return hkpv_sample(u, rng, ledger, HkpvObserver{});
}

SampleConfig hkpv_sample(const OrbitalMatrix& u, RngStream& rng, FlopLedger& ledger,
                         const HkpvObserver& observer) {
  const std::size_t sites = u.sites();
  const std::size_t n = u.particles();

  std::vector<double> residual(sites);
  for (std::size_t x = 0; x < sites; ++x) residual[x] = dot(u.row(x), u.row(x), ledger);

  // coeff(x, i) = u_x . q_i for the orthonormal directions found so far.
  Matrix coeff(sites, n);
  Matrix q(n, n);
  std::vector<bool> taken(sites, false);
  std::vector<double> cumulative(sites);
  std::vector<double> v(n);
  SampleConfig chosen;
  chosen.reserve(n);

  for (std::size_t k = 0; k < n; ++k) {
    double running = 0.0;
    std::size_t free_sites = 0;
    for (std::size_t x = 0; x < sites; ++x) {
      if (!taken[x]) {
        double& r = residual[x];
        if (r < 0.0) {
          if (r < kResidualClamp) {
            throw Error(ErrorCode::NegativeResidual,
                        "residual " + std::to_string(r) + " at site " + std::to_string(x));
          }
          r = 0.0;
        }
        running = free_sites == 0 ? r : running + r;
        ++free_sites;
      }
      cumulative[x] = running;
    }
    if (free_sites > 1) ledger.add(free_sites - 1);
    if (observer) observer(k, residual);

    const double expected = static_cast<double>(n - k);
    if (!(std::abs(running - expected) <= kTraceTolerance)) {
      throw Error(ErrorCode::NormalizationLoss, "residuals sum to " + std::to_string(running) +
                                                    ", expected " + std::to_string(n - k));
    }

    const double target = rng.uniform_open_closed() * running;
    ledger.mul();
    auto it = std::lower_bound(cumulative.begin(), cumulative.end(), target);
    std::size_t j;
    if (it == cumulative.end()) {
      j = sites;
      while (j-- > 0)
        if (!taken[j] && residual[j] > 0.0) break;
    } else {
      j = static_cast<std::size_t>(it - cumulative.begin());
    }
    chosen.push_back(j);
    taken[j] = true;
    residual[j] = 0.0;
    if (k + 1 == n) break;

    // q_k: component of u_j orthogonal to q_0..q_{k-1}, normalized.
    const auto uj = u.row(j);
    std::copy(uj.begin(), uj.end(), v.begin());
    for (std::size_t i = 0; i < k; ++i) {
      const double c = coeff(j, i);
      const auto qi = q.row(i);
      for (std::size_t a = 0; a < n; ++a) v[a] -= c * qi[a];
    }
    ledger.mul(k * n);
    ledger.add(k * n);
    const double inv_norm = 1.0 / std::sqrt(dot(v, v, ledger));
    ledger.mul(2);
    auto qk = q.row(k);
    for (std::size_t a = 0; a < n; ++a) qk[a] = v[a] * inv_norm;
    ledger.mul(n);

    for (std::size_t x = 0; x < sites; ++x) {
      if (taken[x]) continue;
      const double c = dot(u.row(x), qk, ledger);
      coeff(x, k) = c;
      residual[x] -= c * c;
      ledger.mul();
      ledger.add();
    }
  }
  return chosen;
}

// --- InverseTracker -----------------------------------------------------------

InverseTracker::InverseTracker(Matrix a) : a_(std::move(a)) {
  if (a_.rows() != a_.cols()) throw Error(ErrorCode::InvalidShape, "tracked matrix must be square");
  recompute();
  recomputations_ = 0;
}

bool InverseTracker::well_conditioned() const noexcept { return condition_ * kIllConditioned < 1.0; }

void InverseTracker::recompute() {
  const double det = determinant(a_);
  if (det == 0.0 || !std::isfinite(det)) throw Error(ErrorCode::IllConditioned, "singular matrix");
  inv_ = detsamp::inverse(a_);
  condition_ = a_.norm_inf() * inv_.norm_inf();
  log_abs_det_ = std::log(std::abs(det));
  sign_ = det < 0.0 ? -1 : 1;
  since_refresh_ = 0;
  ++recomputations_;
}

double InverseTracker::ratio(std::size_t row, std::span<const double> new_row,
                             FlopLedger& ledger) const {
  const std::size_t n = size();
  if (!well_conditioned()) {
    Matrix next = a_;
    std::copy(new_row.begin(), new_row.end(), next.row(row).begin());
    ledger.mul(n * n * n / 3 + 1);
    ledger.add(n * n * n / 3);
    return determinant(next) * static_cast<double>(sign_) * std::exp(-log_abs_det_);
  }
  double s = new_row[0] * inv_(0, row);
  for (std::size_t c = 1; c < n; ++c) s += new_row[c] * inv_(c, row);
  ledger.mul(n);
  ledger.add(n - 1);
  return s;
}

void InverseTracker::replace_row(std::size_t row, std::span<const double> new_row, double ratio,
                                 FlopLedger& ledger) {
  const std::size_t n = size();
  const bool trusted = well_conditioned();
  std::copy(new_row.begin(), new_row.end(), a_.row(row).begin());

  if (!trusted || std::abs(ratio) < kIllConditioned || ++since_refresh_ >= kRefreshInterval) {
    // LU factorization plus inversion.
    ledger.mul(n * n * n);
    ledger.add(n * n * n);
    recompute();
    return;
  }

  // w = new_row^T A^{-1}; then A'^{-1} = A^{-1} - b (w - e_row)^T / ratio with b = A^{-1} e_row.
  std::vector<double> w(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    const double vc = new_row[c];
    const auto inv_row = inv_.row(c);
    for (std::size_t j = 0; j < n; ++j) w[j] += vc * inv_row[j];
  }
  ledger.mul(n * n);
  ledger.add(n * (n - 1));

  std::vector<double> b = inv_.column(row);
  const double inv_ratio = 1.0 / ratio;
  ledger.mul();
  for (std::size_t j = 0; j < n; ++j) {
    if (j == row) {
      for (std::size_t i = 0; i < n; ++i) inv_(i, j) = b[i] * inv_ratio;
      ledger.mul(n);
    } else {
      const double f = w[j] * inv_ratio;
      for (std::size_t i = 0; i < n; ++i) inv_(i, j) -= f * b[i];
      ledger.mul(n + 1);
      ledger.add(n);
    }
  }
  log_abs_det_ += std::log(std::abs(ratio));
  if (ratio < 0.0) sign_ = -sign_;
}

// --- SlaterChain ----------------------------------------------------------------

namespace {

Matrix selected_rows(const OrbitalMatrix& u, const SampleConfig& config) {
  const std::size_t n = u.particles();
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = u.row(config[i]);
    std::copy(row.begin(), row.end(), a.row(i).begin());
  }
  return a;
}

InverseTracker start_tracker(const OrbitalMatrix& u, const SampleConfig& config) {
  if (config.size() != u.particles() || !is_exclusive(config, u.sites())) {
    throw Error(ErrorCode::InvalidInput, "initial configuration must hold N distinct sites");
  }
  Matrix a = selected_rows(u, config);
  const double det = determinant(a);
  if (!(std::abs(det) >= SlaterChain::kSingularDet)) {
    throw Error(ErrorCode::SingularStart, "|det| below threshold for initial configuration");
  }
  return InverseTracker(std::move(a));
}

}  // namespace

SlaterChain::SlaterChain(const OrbitalMatrix& u, SampleConfig initial)
    : u_(&u),
      config_(std::move(initial)),
      empty_index_(u.sites(), std::numeric_limits<std::size_t>::max()),
      tracker_(start_tracker(u, config_)) {
  std::vector<bool> occ(u.sites(), false);
  for (auto x : config_) occ[x] = true;
  for (std::size_t x = 0; x < u.sites(); ++x) {
    if (!occ[x]) {
      empty_index_[x] = empty_.size();
      empty_.push_back(x);
    }
  }
}

SlaterChain SlaterChain::random_start(const OrbitalMatrix& u, RngStream& rng) {
  const std::size_t sites = u.sites();
  const std::size_t n = u.particles();
  std::vector<std::size_t> pool(sites);
  for (int attempt = 0; attempt < kMaxRestarts; ++attempt) {
    std::iota(pool.begin(), pool.end(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.uniform_index(sites - i));
      std::swap(pool[i], pool[j]);
    }
    try {
      return SlaterChain(u, SampleConfig(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(n)));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularStart && e.code() != ErrorCode::IllConditioned) throw;
    }
  }
  throw Error(ErrorCode::SingularStart,
              "no nonsingular start after " + std::to_string(kMaxRestarts) + " restarts");
}

std::optional<SlaterChain::Proposal> SlaterChain::propose(RngStream& rng, FlopLedger& ledger) const {
  if (empty_.empty()) return std::nullopt;
  Proposal p{};
  p.slot = static_cast<std::size_t>(rng.uniform_index(config_.size()));
  p.site = empty_[static_cast<std::size_t>(rng.uniform_index(empty_.size()))];
  p.det_ratio = tracker_.ratio(p.slot, u_->row(p.site), ledger);
  return p;
}

void SlaterChain::accept(const Proposal& p, FlopLedger& ledger) {
  tracker_.replace_row(p.slot, u_->row(p.site), p.det_ratio, ledger);
  const std::size_t old_site = config_[p.slot];
  config_[p.slot] = p.site;
  const std::size_t idx = empty_index_[p.site];
  empty_[idx] = old_site;
  empty_index_[old_site] = idx;
  empty_index_[p.site] = std::numeric_limits<std::size_t>::max();
}

SampleConfig SlaterChain::proposed_config(const Proposal& p) const {
  SampleConfig next = config_;
  next[p.slot] = p.site;
  return next;
}

// --- Streams ----------------------------------------------------------------------

namespace {

bool metropolis_accept(double ratio, RngStream& rng) { return ratio >= 1.0 || rng.uniform() < ratio; }

}  // namespace

std::vector<SampleConfig> markov_sample_stream(const OrbitalMatrix& u, const LogJastrow& log_jastrow,
                                               const MarkovOptions& opts, RngStream& rng,
                                               FlopLedger& ledger) {
  if (opts.thin == 0) throw Error(ErrorCode::InvalidInput, "thin must be >= 1");
  SlaterChain chain = opts.initial ? SlaterChain(u, *opts.initial) : SlaterChain::random_start(u, rng);
  double log_j = log_jastrow ? log_jastrow(chain.config()) : 0.0;

  auto step = [&] {
    const auto p = chain.propose(rng, ledger);
    if (!p) return;
    double acc = p->det_ratio * p->det_ratio;
    ledger.mul();
    double log_j_next = 0.0;
    if (log_jastrow) {
      log_j_next = log_jastrow(chain.proposed_config(*p));
      acc *= std::exp(2.0 * (log_j_next - log_j));
      ledger.mul(2);
      ledger.add();
    }
    if (metropolis_accept(acc, rng)) {
      chain.accept(*p, ledger);
      log_j = log_j_next;
    }
  };

  for (std::size_t s = 0; s < opts.burn_in; ++s) step();
  std::vector<SampleConfig> out;
  out.reserve(opts.keep);
  for (std::size_t i = 0; i < opts.keep; ++i) {
    for (std::size_t s = 0; s < opts.thin; ++s) step();
    out.push_back(sorted_config(chain.config()));
  }
  return out;
}

std::vector<SpinfulConfig> markov_sample_spinful(const OrbitalMatrix& u_up, const OrbitalMatrix& u_dn,
                                                 const LogJastrowSpinful& log_jastrow,
                                                 const SpinfulMarkovOptions& opts, RngStream& rng,
                                                 FlopLedger& ledger) {
  if (opts.thin == 0) throw Error(ErrorCode::InvalidInput, "thin must be >= 1");
  SlaterChain up = SlaterChain::random_start(u_up, rng);
  SlaterChain dn = SlaterChain::random_start(u_dn, rng);
  SpinfulConfig current{up.config(), dn.config()};
  double log_j = log_jastrow ? log_jastrow(current) : 0.0;
  std::size_t step_index = 0;

  auto step = [&] {
    const bool move_up = (step_index++ % 2) == 0;
    SlaterChain& chain = move_up ? up : dn;
    const auto p = chain.propose(rng, ledger);
    if (!p) return;
    double acc = p->det_ratio * p->det_ratio;
    ledger.mul();
    double log_j_next = 0.0;
    SpinfulConfig next;
    if (log_jastrow) {
      next = current;
      (move_up ? next.up : next.dn)[p->slot] = p->site;
      log_j_next = log_jastrow(next);
      acc *= std::exp(2.0 * (log_j_next - log_j));
      ledger.mul(2);
      ledger.add();
    }
    if (metropolis_accept(acc, rng)) {
      chain.accept(*p, ledger);
      (move_up ? current.up : current.dn)[p->slot] = p->site;
      log_j = log_j_next;
    }
  };

  for (std::size_t s = 0; s < opts.burn_in; ++s) step();
  std::vector<SpinfulConfig> out;
  out.reserve(opts.keep);
  for (std::size_t i = 0; i < opts.keep; ++i) {
    for (std::size_t s = 0; s < opts.thin; ++s) step();
    out.push_back({sorted_config(current.up), sorted_config(current.dn)});
  }
  return out;
}

}  // namespace detsamp
