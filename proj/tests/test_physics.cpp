// Copyright 2026 The detsamp Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "detsamp/error.hpp"
#include "detsamp/ffs.hpp"
#include "detsamp/linalg.hpp"
#include "detsamp/physics.hpp"
#include "detsamp/stats.hpp"

namespace detsamp {
namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidInput;
}

TEST(DoubleWell, SymmetricPotentialAtZeroSkew) {
  const auto spec = build_double_well({});
  ASSERT_EQ(spec.sites(), 64u);
  for (std::size_t i = 0; i < 64; ++i) {
    EXPECT_EQ(spec.potential[i], spec.potential[63 - i]);
    EXPECT_EQ(spec.coordinates[i], -spec.coordinates[63 - i]);
  }
  EXPECT_DOUBLE_EQ(spec.coordinates.front(), -2.0);
  EXPECT_DOUBLE_EQ(spec.coordinates.back(), 2.0);
  EXPECT_DOUBLE_EQ(spec.t, std::numbers::pi * std::numbers::pi / 6.0);
}

TEST(DoubleWell, BarrierHeightAtOrigin) {
  DoubleWellParams p;
  p.sites = 65;
  const auto spec = build_double_well(p);
  EXPECT_EQ(spec.coordinates[32], 0.0);
  EXPECT_DOUBLE_EQ(spec.potential[32], 16384.0);
}

TEST(DoubleWell, SkewTiltsPotential) {
  DoubleWellParams p;
  p.c = 10.0;
  const auto spec = build_double_well(p);
  for (std::size_t i = 0; i < 64; ++i) {
    const double x = spec.coordinates[i];
    EXPECT_NEAR(spec.potential[i], 4096.0 * (x * x - 2.0) * (x * x - 2.0) - 10.0 * x, 1e-9);
  }
}

TEST(DoubleWell, HamiltonianIsOpenChain) {
  DoubleWellParams p;
  p.sites = 5;
  p.t = 0.5;
  const auto spec = build_double_well(p);
  const Matrix h = hamiltonian(spec);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(h(i, i), spec.potential[i]);
    for (std::size_t j = 0; j < 5; ++j)
      if (i != j) EXPECT_EQ(h(i, j), (i + 1 == j || j + 1 == i) ? -0.5 : 0.0);
  }
}

TEST(Anderson, CleanSpectrumMatchesClosedForm) {
  RngStream rng(1);
  const auto spec = build_anderson({.lx = 4, .ly = 3, .w = 0.0, .t = 1.3}, rng);
  const auto eig = symmetric_eig(hamiltonian(spec));
  std::vector<double> expected;
  for (std::size_t m = 1; m <= 4; ++m)
    for (std::size_t n = 1; n <= 3; ++n)
      expected.push_back(-2.0 * 1.3 *
                         (std::cos(std::numbers::pi * m / 5.0) + std::cos(std::numbers::pi * n / 4.0)));
  std::sort(expected.begin(), expected.end());
  ASSERT_EQ(eig.values.size(), expected.size());
  for (std::size_t k = 0; k < expected.size(); ++k)
    EXPECT_NEAR(eig.values[k], expected[k], 1e-8 * std::max(1.0, std::abs(expected[k])));
}

TEST(Anderson, DisorderIsBoundedAndSeeded) {
  RngStream a(7), b(7), c(8);
  const auto sa = build_anderson({.lx = 4, .ly = 4, .w = 3.0}, a);
  const auto sb = build_anderson({.lx = 4, .ly = 4, .w = 3.0}, b);
  const auto sc = build_anderson({.lx = 4, .ly = 4, .w = 3.0}, c);
  EXPECT_EQ(sa.potential, sb.potential);
  EXPECT_NE(sa.potential, sc.potential);
  for (double w : sa.potential) EXPECT_LE(std::abs(w), 3.0);
  EXPECT_TRUE(sa.coordinates.empty());
}

TEST(Anderson, SquareNeighbours) {
  RngStream rng(2);
  const auto h = hamiltonian(build_anderson({.lx = 3, .ly = 2, .w = 0.0}, rng));
  // Site index ix * ly + iy.
  EXPECT_EQ(h(0, 1), -1.0);
  EXPECT_EQ(h(0, 2), -1.0);
  EXPECT_EQ(h(1, 2), 0.0);
  EXPECT_EQ(h(0, 3), 0.0);
}

TEST(LatticeSpec, Validation) {
  LatticeSpec s;
  s.lx = 3;
  s.potential = {0.0, 0.0, 0.0};
  s.t = 0.0;
  EXPECT_EQ(code_of([&] { (void)hamiltonian(s); }), ErrorCode::InvalidInput);
  s.t = 1.0;
  s.potential = {0.0, NAN, 0.0};
  EXPECT_EQ(code_of([&] { (void)hamiltonian(s); }), ErrorCode::InvalidInput);
  s.potential = {0.0, 0.0};
  EXPECT_EQ(code_of([&] { (void)hamiltonian(s); }), ErrorCode::InvalidInput);
  s.lx = 1;
  s.potential = {0.0};
  EXPECT_EQ(code_of([&] { (void)hamiltonian(s); }), ErrorCode::InvalidInput);
}

TEST(GroundState, WeakHoppingLocalizesOnDeepestSites) {
  LatticeSpec s;
  s.lx = 6;
  s.t = 1e-9;
  s.potential = {3.0, -1.0, 5.0, -4.0, 0.5, 2.0};
  const auto u = ground_state_orbitals(s, 3);
  const auto d = u.kernel_diagonal();
  for (std::size_t x : {1u, 3u, 4u}) EXPECT_NEAR(d[x], 1.0, 1e-8);
  for (std::size_t x : {0u, 2u, 5u}) EXPECT_NEAR(d[x], 0.0, 1e-8);
}

TEST(GroundState, FullFillingIsOrthogonal) {
  RngStream rng(3);
  const auto spec = build_anderson({.lx = 3, .ly = 3, .w = 1.0}, rng);
  const auto g = ground_state(spec, 9);
  const Matrix p = g.orbitals.matrix() * g.orbitals.matrix().transpose();
  for (std::size_t i = 0; i < 9; ++i)
    for (std::size_t j = 0; j < 9; ++j) EXPECT_NEAR(p(i, j), i == j ? 1.0 : 0.0, 1e-10);
  EXPECT_EQ(g.energies.size(), 9u);
}

TEST(GroundState, SymmetricDensityAtZeroSkew) {
  const auto spec = build_double_well({});
  const auto d = ground_state_orbitals(spec, 4).kernel_diagonal();
  for (std::size_t i = 0; i < 64; ++i) EXPECT_NEAR(d[i], d[63 - i], 1e-8);
}

TEST(GroundState, Errors) {
  RngStream rng(4);
  const auto clean = build_anderson({.lx = 4, .ly = 4, .w = 0.0}, rng);
  EXPECT_EQ(code_of([&] { (void)ground_state(clean, 2); }), ErrorCode::DegenerateFilling);
  EXPECT_EQ(code_of([&] { (void)ground_state(clean, 17); }), ErrorCode::InvalidInput);
  EXPECT_EQ(code_of([&] { (void)ground_state(clean, 0); }), ErrorCode::InvalidInput);
}

TEST(Observables, WellImbalance) {
  const auto x = build_double_well({}).coordinates;
  EXPECT_EQ(well_imbalance({0, 1, 2, 3}, x), -4);
  EXPECT_EQ(well_imbalance({0, 1, 62, 63}, x), 0);
  EXPECT_EQ(well_imbalance({60, 61, 62, 63}, x), 4);
  EXPECT_EQ(left_well_count({0, 1, 62, 40}, x), 2u);
}

TEST(Observables, LeftWellWeight) {
  const OrbitalMatrix u(Matrix(4, 1, std::vector<double>{0.5, 0.5, std::sqrt(0.5), 0.0}));
  const std::vector<double> x{-1.5, -0.5, 0.5, 1.5};
  EXPECT_NEAR(left_well_weight(u, 0, x), 0.5, 1e-15);
}

TEST(Observables, Gutzwiller) {
  const SpinfulConfig none{{0, 1}, {2, 3}};
  const SpinfulConfig two{{0, 1, 2}, {1, 2, 3}};
  EXPECT_EQ(double_occupancy(none), 0u);
  EXPECT_EQ(double_occupancy(two), 2u);
  EXPECT_EQ(gutzwiller_log_weight(none, 2.5), 0.0);
  EXPECT_EQ(gutzwiller_log_weight(two, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(gutzwiller_log_weight(two, 1.0), -1.0);
  EXPECT_DOUBLE_EQ(std::exp(gutzwiller_log_weight(two, 1.0)), std::exp(-1.0));
}

TEST(Reweighting, ZeroInteractionIsPlainMean) {
  RngStream rng(5);
  std::vector<SpinfulConfig> samples;
  std::vector<double> values;
  const auto obs = [](const SpinfulConfig& c) { return 0.1 * static_cast<double>(c.up[0] + 3 * c.dn[0]); };
  for (int i = 0; i < 1000; ++i) {
    samples.push_back({{rng.uniform_index(7)}, {rng.uniform_index(7)}});
    values.push_back(obs(samples.back()));
  }
  double plain = 0.0;
  for (double v : values) plain += v;
  plain /= static_cast<double>(values.size());
  EXPECT_EQ(reweighted_expectation(samples, 0.0, obs), plain);
  EXPECT_NEAR(reweighted_expectation(samples, 4.0, [](const SpinfulConfig&) { return 2.5; }), 2.5, 1e-12);
}

TEST(Reweighting, HugeInteractionStaysFinite) {
  const std::vector<SpinfulConfig> samples{{{0}, {0}}, {{0}, {1}}};
  const auto obs = [](const SpinfulConfig& c) { return c.up[0] == c.dn[0] ? 1.0 : 0.0; };
  EXPECT_NEAR(reweighted_expectation(samples, 1e4, obs), 0.0, 1e-300);
}

TEST(Reweighting, Errors) {
  const auto obs = [](const SpinfulConfig&) { return 1.0; };
  EXPECT_EQ(code_of([&] { (void)reweighted_expectation({}, 0.0, obs); }), ErrorCode::InvalidInput);
  const std::vector<SpinfulConfig> one{{{0}, {0}}};
  EXPECT_EQ(code_of([&] { (void)reweighted_expectation(one, INFINITY, obs); }), ErrorCode::InvalidInput);
}

TEST(Reweighting, TwoSiteToyMatchesEnumeration) {
  const OrbitalMatrix up(Matrix(2, 1, std::vector<double>{std::sqrt(0.7), std::sqrt(0.3)}));
  const OrbitalMatrix dn(Matrix(2, 1, std::vector<double>{std::sqrt(0.4), std::sqrt(0.6)}));
  const double v = 1.5;
  RngStream rng(6);
  FlopLedger l;
  std::vector<SpinfulConfig> samples;
  for (int i = 0; i < 100000; ++i) samples.push_back({ffs_sample(up, rng, l), ffs_sample(dn, rng, l)});
  const auto obs = [](const SpinfulConfig& c) { return c.up[0] == 0 && c.dn[0] == 0 ? 1.0 : 0.0; };
  double z = 0.0, num = 0.0;
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) {
      const double w = up(a, 0) * up(a, 0) * dn(b, 0) * dn(b, 0) * (a == b ? std::exp(-v) : 1.0);
      z += w;
      if (a == 0 && b == 0) num += w;
    }
  const double p = num / z;
  EXPECT_NEAR(reweighted_expectation(samples, v, obs), p, 4.0 * std::sqrt(p * (1 - p) / 1e5) * 2.0);
}

TEST(Bernoulli, Examples) {
  EXPECT_DOUBLE_EQ(bernoulli_error(0.5, 100), 0.05);
  EXPECT_EQ(bernoulli_error(0.0, 100), 0.0);
  EXPECT_DOUBLE_EQ(bernoulli_error(0.5, 1), 0.5);
  EXPECT_EQ(code_of([] { (void)bernoulli_error(1.5, 10); }), ErrorCode::InvalidInput);
  EXPECT_EQ(code_of([] { (void)bernoulli_error(0.5, 0.5); }), ErrorCode::InvalidInput);
}

TEST(ModelParams, ParsesDoubleWell) {
  const auto p = parse_model_params(R"({"model":"double_well","L":32,"c":12.5,"N":4,"seed":9})");
  EXPECT_EQ(p.model, "double_well");
  EXPECT_EQ(*p.sites, 32u);
  const auto dw = to_double_well(p);
  EXPECT_EQ(dw.sites, 32u);
  EXPECT_EQ(dw.c, 12.5);
  EXPECT_EQ(dw.a, 4096.0);
}

TEST(ModelParams, ParsesAnderson) {
  const auto p = parse_model_params(R"({"model":"anderson","Lx":5,"Ly":3,"W":2,"V":1,"Nup":3,"Ndn":2})");
  const auto an = to_anderson(p);
  EXPECT_EQ(an.lx, 5u);
  EXPECT_EQ(an.ly, 3u);
  EXPECT_EQ(an.w, 2.0);
  EXPECT_EQ(*p.n_dn, 2u);
}

TEST(ModelParams, RejectsBadInput) {
  EXPECT_EQ(code_of([] { (void)parse_model_params(R"({"model":"anderson","bogus":1})"); }),
            ErrorCode::InvalidInput);
  EXPECT_EQ(code_of([] { (void)parse_model_params(R"({"model":"ising"})"); }), ErrorCode::InvalidInput);
  EXPECT_EQ(code_of([] { (void)parse_model_params("{not json"); }), ErrorCode::InvalidInput);
  EXPECT_EQ(code_of([] { (void)parse_model_params(R"({"model":"double_well","L":-3})"); }),
            ErrorCode::InvalidInput);
  EXPECT_EQ(code_of([] { (void)load_model_params("/nonexistent/model.json"); }), ErrorCode::InvalidInput);
}

TEST(Sampling, OccupationSumRuleAndDensity) {
  RngStream rng(10);
  const auto spec = build_anderson({.lx = 4, .ly = 4, .w = 2.0}, rng);
  const auto u = ground_state_orbitals(spec, 4);
  const auto d = u.kernel_diagonal();
  FlopLedger l;
  const std::size_t m = 20000;
  std::vector<double> occ(16, 0.0);
  for (std::size_t s = 0; s < m; ++s) {
    const auto c = ffs_sample(u, rng, l);
    ASSERT_EQ(c.size(), 4u);
    for (auto x : c) occ[x] += 1.0;
  }
  double total = 0.0;
  for (std::size_t x = 0; x < 16; ++x) {
    total += occ[x];
    const double p = d[x];
    EXPECT_NEAR(occ[x] / m, p, 4.0 * std::sqrt(p * (1 - p) / m) + 1e-12);
  }
  EXPECT_EQ(total, 4.0 * m);
}

TEST(Sampling, BalancedWellsAtZeroSkew) {
  const auto spec = build_double_well({});
  const auto u = ground_state_orbitals(spec, 4);
  RngStream rng(11);
  FlopLedger l;
  std::vector<double> imb;
  for (int s = 0; s < 100000; ++s) imb.push_back(well_imbalance(ffs_sample(u, rng, l), spec.coordinates));
  EXPECT_LE(std::abs(mean(imb)), 4.0 * standard_error(imb) + 1e-12);
}

}  // namespace
}  // namespace detsamp
