// Copyright 2026 The detsamp Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "detsamp/error.hpp"
#include "detsamp/linalg.hpp"
#include "detsamp/physics.hpp"
#include "detsamp/reference.hpp"
#include "detsamp/stats.hpp"
#include "oracles.hpp"

namespace detsamp {
namespace {

OrbitalMatrix seeded_orbitals(std::size_t l, std::size_t n, std::uint64_t seed) {
  RngStream rng(seed);
  return OrbitalMatrix(oracle::gaussian_orthonormal(l, n, rng));
}

TEST(Hkpv, MatchesDeterminantLaw) {
  const auto u = seeded_orbitals(5, 2, 1);
  RngStream rng(2);
  FlopLedger l;
  std::vector<oracle::Subset> samples;
  for (int i = 0; i < 40000; ++i) samples.push_back(hkpv_sample(u, rng, l));
  const auto support = oracle::k_subsets(5, 2);
  EXPECT_GT(chi_square_gof(oracle::histogram(support, samples), oracle::projection_law(u.matrix())).p_value,
            1e-3);
}

TEST(Hkpv, ResidualsKeepTraceAndSign) {
  const auto u = seeded_orbitals(20, 6, 3);
  RngStream rng(4);
  FlopLedger l;
  std::size_t calls = 0;
  const auto config = hkpv_sample(u, rng, l, [&](std::size_t step, std::span<const double> r) {
    double s = 0.0;
    for (double v : r) {
      EXPECT_GE(v, 0.0);
      s += v;
    }
    EXPECT_NEAR(s, 6.0 - static_cast<double>(step), 1e-10);
    ++calls;
  });
  EXPECT_EQ(calls, 6u);
  EXPECT_TRUE(is_exclusive(config, 20));
}

TEST(Hkpv, CostIsTwiceLNSquared) {
  RngStream rng(5);
  const auto u = random_orthonormal(512, 16, rng);
  FlopLedger l;
  (void)hkpv_sample(u, rng, l);
  const double ref = 2.0 * 512 * 16 * 16;
  EXPECT_LT(std::abs(static_cast<double>(l.total()) - ref) / ref, 0.25);
}

TEST(InverseTracker, RatioMatchesDeterminants) {
  RngStream rng(6);
  Matrix a(4, 4);
  for (auto& v : a.data()) v = rng.normal();
  InverseTracker t(a);
  FlopLedger l;
  std::vector<double> row{0.3, -1.2, 0.7, 2.0};
  Matrix b = a;
  for (std::size_t c = 0; c < 4; ++c) b(2, c) = row[c];
  EXPECT_NEAR(t.ratio(2, row, l), oracle::leibniz_det(b) / oracle::leibniz_det(a), 1e-12);
  EXPECT_EQ(l, FlopLedger(4, 3));
}

TEST(InverseTracker, ShermanMorrisonKeepsInverseCurrent) {
  RngStream rng(7);
  Matrix a(5, 5);
  for (auto& v : a.data()) v = rng.normal();
  InverseTracker t(a);
  FlopLedger l;
  for (int step = 0; step < 20; ++step) {
    const std::size_t r = rng.uniform_index(5);
    std::vector<double> row(5);
    for (auto& v : row) v = rng.normal();
    const double ratio = t.ratio(r, row, l);
    t.replace_row(r, row, ratio, l);
    const Matrix p = t.matrix() * t.inverse();
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j) ASSERT_NEAR(p(i, j), i == j ? 1.0 : 0.0, 1e-8);
    EXPECT_NEAR(t.log_abs_det(), std::log(std::abs(oracle::leibniz_det(t.matrix()))), 1e-9);
  }
}

TEST(InverseTracker, RefreshesEverySixtyFourUpdates) {
  InverseTracker t(Matrix::identity(2));
  FlopLedger l;
  RngStream rng(8);
  for (std::size_t i = 0; i < InverseTracker::kRefreshInterval; ++i) {
    std::vector<double> row{1.0 + 0.1 * rng.uniform(), 0.2 * rng.uniform()};
    const double ratio = t.ratio(0, row, l);
    t.replace_row(0, row, ratio, l);
  }
  EXPECT_EQ(t.direct_recomputations(), 1u);
}

TEST(InverseTracker, TinyRatioForcesRecompute) {
  InverseTracker t(Matrix::identity(2));
  FlopLedger l;
  const std::vector<double> row{1e-13, 1.0};
  const double ratio = t.ratio(0, row, l);
  EXPECT_NEAR(ratio, 1e-13, 1e-28);
  t.replace_row(0, row, ratio, l);
  EXPECT_EQ(t.direct_recomputations(), 1u);
}

TEST(InverseTracker, NearlySingularUsesDirectDeterminants) {
  InverseTracker t(Matrix(2, 2, std::vector<double>{1.0, 1.0, 1.0, 1.0 + 1e-14}));
  EXPECT_FALSE(t.well_conditioned());
  FlopLedger l;
  const std::vector<double> row{0.0, 1.0};
  const double ratio = t.ratio(1, row, l);
  Matrix next(2, 2, std::vector<double>{1.0, 1.0, 0.0, 1.0});
  EXPECT_NEAR(ratio, oracle::leibniz_det(next) / oracle::leibniz_det(t.matrix()), 1e-3 * std::abs(ratio));
  t.replace_row(1, row, ratio, l);
  EXPECT_TRUE(t.well_conditioned());
  EXPECT_EQ(t.direct_recomputations(), 1u);
}

TEST(InverseTracker, LargeRandomMatricesStayOnFastPath) {
  RngStream rng(23);
  Matrix a(128, 128);
  for (auto& v : a.data()) v = rng.normal();
  InverseTracker t(a);
  EXPECT_TRUE(t.well_conditioned());
  FlopLedger l;
  std::vector<double> row(128);
  for (auto& v : row) v = rng.normal();
  (void)t.ratio(5, row, l);
  EXPECT_EQ(l, FlopLedger(128, 127));
}

TEST(SlaterChain, SingularStartIsRejected) {
  // Sites 0 and 1 carry identical rows.
  const OrbitalMatrix u(Matrix(4, 2, std::vector<double>{0.5, 0.5, 0.5, 0.5, 0.5, -0.5, 0.5, -0.5}));
  try {
    SlaterChain chain(u, {0, 1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::SingularStart);
  }
  EXPECT_NO_THROW(SlaterChain(u, {0, 2}));
}

TEST(SlaterChain, FullLatticeHasNoMoves) {
  const auto u = seeded_orbitals(3, 3, 9);
  RngStream rng(10);
  FlopLedger l;
  MarkovOptions opts;
  opts.keep = 5;
  opts.initial = SampleConfig{2, 0, 1};
  const auto stream = markov_sample_stream(u, {}, opts, rng, l);
  for (const auto& c : stream) EXPECT_EQ(sorted_config(c), (SampleConfig{0, 1, 2}));
}

TEST(SlaterChain, ProposalRatioMatchesDeterminants) {
  const auto u = seeded_orbitals(6, 3, 11);
  SlaterChain chain(u, {0, 2, 4});
  RngStream rng(12);
  FlopLedger l;
  for (int i = 0; i < 20; ++i) {
    const auto p = chain.propose(rng, l);
    ASSERT_TRUE(p);
    const double before = oracle::leibniz_det(oracle::rows_of(u.matrix(), chain.config()));
    const double after = oracle::leibniz_det(oracle::rows_of(u.matrix(), chain.proposed_config(*p)));
    EXPECT_NEAR(p->det_ratio, after / before, 1e-9 * (1 + std::abs(after / before)));
    chain.accept(*p, l);
  }
}

TEST(Markov, DetailedBalanceOnSmallLattice) {
  const auto u = seeded_orbitals(4, 2, 13);
  RngStream rng(14);
  FlopLedger l;
  MarkovOptions opts;
  opts.burn_in = 100;
  opts.keep = 200000;
  const auto stream = markov_sample_stream(u, {}, opts, rng, l);
  std::map<std::pair<SampleConfig, SampleConfig>, double> flow;
  for (std::size_t i = 1; i < stream.size(); ++i)
    if (stream[i] != stream[i - 1]) flow[{sorted_config(stream[i - 1]), sorted_config(stream[i])}] += 1.0;
  ASSERT_FALSE(flow.empty());
  for (const auto& [edge, forward] : flow) {
    const double backward = flow.count({edge.second, edge.first}) ? flow[{edge.second, edge.first}] : 0.0;
    EXPECT_LE(std::abs(forward - backward), 4.0 * std::sqrt(forward + backward) + 1.0);
  }
}

TEST(Markov, StationaryLawMatchesDeterminants) {
  const auto u = seeded_orbitals(5, 2, 15);
  RngStream rng(16);
  FlopLedger l;
  MarkovOptions opts;
  opts.burn_in = 1000;
  opts.keep = 50000;
  opts.thin = 4;
  const auto stream = markov_sample_stream(u, {}, opts, rng, l);
  const auto support = oracle::k_subsets(5, 2);
  std::vector<oracle::Subset> samples(stream.begin(), stream.end());
  EXPECT_LT(oracle::tv(oracle::histogram(support, samples), oracle::projection_law(u.matrix())), 0.02);
}

TEST(Markov, JastrowTiltsTheLaw) {
  // log J = 0.5 * [site 0 occupied] doubles its odds relative to |det|^2... by e^1.
  const auto u = seeded_orbitals(4, 1, 17);
  RngStream rng(18);
  FlopLedger l;
  MarkovOptions opts;
  opts.burn_in = 1000;
  opts.keep = 200000;
  const LogJastrow log_j = [](const SampleConfig& c) { return c[0] == 0 ? 0.5 : 0.0; };
  const auto stream = markov_sample_stream(u, log_j, opts, rng, l);
  std::vector<double> w(4);
  for (std::size_t x = 0; x < 4; ++x) w[x] = u(x, 0) * u(x, 0) * (x == 0 ? std::exp(1.0) : 1.0);
  std::vector<double> counts(4, 0.0);
  for (const auto& c : stream) counts[c[0]] += 1.0;
  EXPECT_LT(total_variation(counts, w), 0.01);
}

TEST(MarkovSpinful, MatchesInteractingEnumeration) {
  const double s = std::sqrt(0.5);
  const OrbitalMatrix up(Matrix(2, 1, std::vector<double>{s, s}));
  const OrbitalMatrix dn(Matrix(2, 1, std::vector<double>{std::sqrt(0.8), std::sqrt(0.2)}));
  const double v = 1.0;
  const LogJastrowSpinful log_j = [v](const SpinfulConfig& c) { return gutzwiller_log_weight(c, v); };
  SpinfulMarkovOptions opts;
  opts.burn_in = 100;
  opts.keep = 200000;
  RngStream rng(19);
  FlopLedger l;
  const auto stream = markov_sample_spinful(up, dn, log_j, opts, rng, l);
  std::vector<double> counts(4, 0.0), law(4, 0.0);
  for (const auto& c : stream) counts[2 * c.up[0] + c.dn[0]] += 1.0;
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      law[2 * a + b] = up(a, 0) * up(a, 0) * dn(b, 0) * dn(b, 0) * (a == b ? std::exp(-v) : 1.0);
  EXPECT_LT(total_variation(counts, law), 0.01);
}

TEST(Markov, ThinMustBePositive) {
  const auto u = seeded_orbitals(4, 2, 20);
  RngStream rng(1);
  FlopLedger l;
  MarkovOptions opts;
  opts.thin = 0;
  EXPECT_THROW((void)markov_sample_stream(u, {}, opts, rng, l), Error);
}

}  // namespace
}  // namespace detsamp
