// Copyright 2026 The detsamp Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <atomic>
#include <cstdlib>
#include <stdexcept>

#include "detsamp/error.hpp"
#include "detsamp/experiments.hpp"

namespace detsamp {
namespace {

class ThreadsEnv {
 public:
  explicit ThreadsEnv(const char* value) { setenv("DETSAMP_THREADS", value, 1); }
  ~ThreadsEnv() { unsetenv("DETSAMP_THREADS"); }
};

TEST(Algorithm, RoundTripNames) {
  for (auto a : {Algorithm::Ffs, Algorithm::Hkpv, Algorithm::Markov})
    EXPECT_EQ(parse_algorithm(to_string(a)), a);
  EXPECT_THROW((void)parse_algorithm("gibbs"), Error);
}

TEST(WorkerCount, ReadsEnvironment) {
  {
    ThreadsEnv env("3");
    EXPECT_EQ(worker_count(), 3u);
  }
  {
    ThreadsEnv env("zero");
    EXPECT_GE(worker_count(), 1u);
  }
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  ThreadsEnv env("4");
  std::vector<std::atomic<int>> hits(257);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i].fetch_add(1); });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  parallel_for(0, [](std::size_t) { FAIL(); });
}

TEST(ParallelFor, RethrowsLowestIndexFailure) {
  ThreadsEnv env("4");
  try {
    parallel_for(100, [](std::size_t i) {
      if (i == 17 || i == 80) throw std::runtime_error(std::to_string(i));
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "17");
  }
}

TEST(BenchFlops, SortedByAlgorithmThenParticles) {
  const auto rows = bench_flops(64, {8, 2, 4}, {Algorithm::Markov, Algorithm::Ffs, Algorithm::Hkpv}, 5);
  ASSERT_EQ(rows.size(), 9u);
  const std::vector<Algorithm> order{Algorithm::Ffs, Algorithm::Ffs, Algorithm::Ffs, Algorithm::Hkpv,
                                     Algorithm::Hkpv, Algorithm::Hkpv, Algorithm::Markov,
                                     Algorithm::Markov, Algorithm::Markov};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].algorithm, order[i]);
    EXPECT_EQ(rows[i].particles, std::vector<std::size_t>({2, 4, 8})[i % 3]);
    EXPECT_GT(rows[i].ledger.total(), 0u);
  }
  const auto csv = bench_rows_to_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "N,algorithm,multiplies,additions,total");
  EXPECT_EQ(bench_flops(64, {8, 2, 4}, {Algorithm::Markov, Algorithm::Ffs, Algorithm::Hkpv}, 5).size(), 9u);
}

TEST(BenchFlops, RejectsOversizedParticleCount) {
  EXPECT_THROW((void)bench_flops(16, {17}, {Algorithm::Ffs}, 1), Error);
}

DoubleWellOptions small_double_well() {
  DoubleWellOptions o;
  o.model.sites = 16;
  o.c_values = {0.0, 1000.0};
  o.trials = 20;
  o.samples_per_trial = 20;
  o.burn_in = 100;
  o.acf_length = 500;
  return o;
}

TEST(DoubleWell, ImbalanceEndpoints) {
  const auto points = run_double_well(small_double_well());
  ASSERT_EQ(points.size(), 2u);
  EXPECT_NEAR(points[0].exact_imbalance, 0.0, 1e-9);
  EXPECT_NEAR(points[1].exact_imbalance, 2.0, 1e-6);
  for (const auto& p : points) {
    EXPECT_FALSE(p.failure);
    ASSERT_EQ(p.algorithms.size(), 2u);
    for (const auto& a : p.algorithms) {
      EXPECT_NEAR(a.mean_imbalance, p.exact_imbalance, 1e-9);
      EXPECT_GT(a.ledger.total(), 0u);
    }
  }
}

TEST(DoubleWell, DeterministicAcrossWorkerCounts) {
  auto o = small_double_well();
  o.model.sites = 12;
  o.model.a = 4.0;
  o.c_values = {1.0};
  std::vector<DoubleWellPoint> one, four;
  {
    ThreadsEnv env("1");
    one = run_double_well(o);
  }
  {
    ThreadsEnv env("4");
    four = run_double_well(o);
  }
  ASSERT_EQ(one.size(), four.size());
  for (std::size_t a = 0; a < one[0].algorithms.size(); ++a) {
    EXPECT_EQ(one[0].algorithms[a].rms_error, four[0].algorithms[a].rms_error);
    EXPECT_EQ(one[0].algorithms[a].mean_imbalance, four[0].algorithms[a].mean_imbalance);
    EXPECT_EQ(one[0].algorithms[a].ledger, four[0].algorithms[a].ledger);
  }
  EXPECT_GT(one[0].algorithms[0].rms_error, 0.0);
}

TEST(Anderson, SmallRunProducesReport) {
  AndersonOptions o;
  o.lx = 3;
  o.ly = 3;
  o.n_up = 2;
  o.n_dn = 2;
  o.w_values = {2.0};
  o.v_values = {0.0, 1.0};
  o.realizations = 2;
  o.trials = 20;
  o.samples_per_trial = 20;
  o.burn_in = 100;
  o.reference_samples = 2000;
  o.acf_length = 1000;
  const auto points = run_anderson(o);
  ASSERT_EQ(points.size(), 4u);
  for (const auto& p : points) {
    EXPECT_FALSE(p.failure) << *p.failure;
    EXPECT_GE(p.reference, 0.0);
    EXPECT_LE(p.reference, 2.0);
    EXPECT_GT(p.ffs_error, 0.0);
    EXPECT_GT(p.markov_error, 0.0);
    ASSERT_TRUE(p.eta);
    EXPECT_NEAR(*p.eta, p.markov_error / p.ffs_error, 1e-12);
  }
  // Ordered by realization, then W, then V.
  EXPECT_EQ(points[1].realization, 0u);
  EXPECT_EQ(points[2].realization, 1u);
  EXPECT_EQ(points[1].v, 1.0);
  EXPECT_EQ(points[2].v, 0.0);
  EXPECT_EQ(points[0].w, 2.0);
}

}  // namespace
}  // namespace detsamp
