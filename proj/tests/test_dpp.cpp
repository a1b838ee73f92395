// Copyright 2026 The detsamp Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>

#include "detsamp/dpp.hpp"
#include "detsamp/error.hpp"
#include "detsamp/stats.hpp"
#include "oracles.hpp"

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

Kernel random_kernel(std::size_t l, std::size_t dim, std::uint64_t seed) {
  RngStream rng(seed);
  std::vector<FeatureVector> v(l, FeatureVector(dim));
  for (auto& f : v)
    for (double& x : f) x = 0.8 * rng.normal();
  return kernel_from_vectors(v);
}

TEST(Kernel, Validation) {
  EXPECT_EQ(code_of([] { Kernel k(Matrix(2, 3)); }), ErrorCode::InvalidShape);
  EXPECT_EQ(code_of([] { Kernel k(Matrix(2, 2, std::vector<double>{1, 0.5, 0.4, 1})); }),
            ErrorCode::NotSymmetric);
  EXPECT_EQ(code_of([] { (void)kernel_from_vectors({{1.0, 0.0}, {1.0}}); }), ErrorCode::DimensionMismatch);
  EXPECT_EQ(code_of([] { DppSampler s(Kernel(Matrix(2, 2, std::vector<double>{0, 1, 1, 0}))); }),
            ErrorCode::NegativeEigenvalue);
}

TEST(KernelFromVectors, OrthonormalGivesIdentity) {
  const auto k = kernel_from_vectors({{1, 0, 0}, {0, 0, 1}, {0, 1, 0}});
  EXPECT_EQ(k.matrix(), Matrix::identity(3));
}

TEST(KernelFromVectors, DuplicateIsSingular) {
  const auto k = kernel_from_vectors({{0.3, 0.4}, {1.0, -2.0}, {0.3, 0.4}});
  const DppSampler s(k);
  EXPECT_EQ(s.eigenvalues().back(), 0.0);
  EXPECT_NEAR(determinant(k.matrix()), 0.0, 1e-12);
}

TEST(KernelFromVectors, SpectrumIsSquaredSingularValues) {
  // Three vectors in R^2: nonzero Gram eigenvalues equal the eigenvalues of B^T B.
  const std::vector<FeatureVector> v{{1.0, 2.0}, {-0.5, 0.3}, {0.7, -1.1}};
  const DppSampler s(kernel_from_vectors(v));
  double a = 0, b = 0, d = 0;
  for (const auto& f : v) {
    a += f[0] * f[0];
    b += f[0] * f[1];
    d += f[1] * f[1];
  }
  const double mid = 0.5 * (a + d), rad = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
  EXPECT_NEAR(s.eigenvalues()[0], mid + rad, 1e-8);
  EXPECT_NEAR(s.eigenvalues()[1], mid - rad, 1e-8);
  EXPECT_NEAR(s.eigenvalues()[2], 0.0, 1e-8);
}

TEST(SampleDpp, ZeroKernelIsAlwaysEmpty) {
  const Kernel k(Matrix(4, 4));
  RngStream rng(1);
  FlopLedger l;
  for (int i = 0; i < 100; ++i) EXPECT_TRUE(sample_dpp(k, rng, l).empty());
}

TEST(SampleDpp, DiagonalOneZero) {
  const Kernel k(Matrix::diagonal(std::vector<double>{1.0, 0.0}));
  const DppSampler s(k);
  RngStream rng(2);
  FlopLedger l;
  double singles = 0.0;
  const int m = 20000;
  for (int i = 0; i < m; ++i) {
    const auto sub = s.sample(rng, l);
    if (sub.empty()) continue;
    ASSERT_EQ(sub, (std::vector<std::size_t>{0}));
    singles += 1.0;
  }
  EXPECT_NEAR(singles / m, 0.5, 4.0 * std::sqrt(0.25 / m));
}

TEST(SampleDpp, LargeIdentityTakesEverything) {
  const DppSampler s(Kernel(Matrix::diagonal(std::vector<double>{1e6, 1e6, 1e6})));
  RngStream rng(3);
  FlopLedger l;
  int full = 0;
  for (int i = 0; i < 10000; ++i) full += s.sample(rng, l) == std::vector<std::size_t>{0, 1, 2};
  EXPECT_GE(full, 9990);
}

TEST(SampleDpp, ExpectedSize) {
  const auto k = random_kernel(8, 5, 4);
  const DppSampler s(k);
  RngStream rng(5);
  FlopLedger l;
  std::vector<double> sizes;
  for (int i = 0; i < 20000; ++i) sizes.push_back(static_cast<double>(s.sample(rng, l).size()));
  double expected = 0.0;
  for (double lam : s.eigenvalues()) expected += lam / (lam + 1.0);
  EXPECT_DOUBLE_EQ(s.expected_size(), expected);
  EXPECT_NEAR(mean(sizes), expected, 4.0 * standard_error(sizes));
}

TEST(SampleDpp, SubsetLawMatchesEnumeration) {
  const auto k = random_kernel(4, 3, 6);
  const DppSampler s(k);
  RngStream rng(7);
  FlopLedger l;
  std::vector<oracle::Subset> samples;
  for (int i = 0; i < 100000; ++i) samples.push_back(s.sample(rng, l));
  const auto support = oracle::all_subsets(4);
  EXPECT_LT(oracle::tv(oracle::histogram(support, samples), oracle::lensemble_law(k.matrix())), 0.02);
}

TEST(SampleDpp, ProjectionKernelBoundsSize) {
  RngStream rng(8);
  const auto u = random_orthonormal(6, 2, rng);
  const Kernel k(u.matrix() * u.matrix().transpose());
  const DppSampler s(k);
  FlopLedger l;
  for (int i = 0; i < 2000; ++i) EXPECT_LE(s.sample(rng, l).size(), 2u);
}

TEST(Mbr, TiesGoToLowestIndex) {
  EXPECT_EQ(mbr_select({{0.6, 0.8}, {0.6, 0.8}, {0.6, 0.8}}), 0u);
  EXPECT_EQ(mbr_select({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}), 0u);
}

TEST(Mbr, PicksClusterCentre) {
  const double a = 0.4;
  std::vector<FeatureVector> v{{std::cos(a), std::sin(a)}, {std::cos(-a), std::sin(-a)}, {1.0, 0.0},
                               {std::cos(0.9 * a), std::sin(0.9 * a)}};
  EXPECT_EQ(mbr_select(v), 2u);
}

TEST(Mbr, Errors) {
  EXPECT_EQ(code_of([] { (void)mbr_select({}); }), ErrorCode::EmptyCandidates);
  EXPECT_EQ(code_of([] { (void)mbr_select({{1.0, 1.0}}); }), ErrorCode::InvalidInput);
}

TEST(SubsetRepresentative, NormalizedMean) {
  const std::vector<FeatureVector> items{{2, 0}, {0, 2}, {5, 5}};
  const auto r = subset_representative(items, {0, 1});
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r[0], std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(r[1], std::sqrt(0.5), 1e-15);
  EXPECT_TRUE(subset_representative(items, {}).empty());
}

TEST(VectorsFromKernel, ReproducesGram) {
  const auto k = random_kernel(5, 3, 9);
  const auto back = kernel_from_vectors(vectors_from_kernel(k));
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(back.matrix()(i, j), k.matrix()(i, j), 1e-9);
}

TEST(Synthetic, DeterministicAndValidated) {
  SyntheticSpec spec;
  spec.items = 20;
  RngStream a(10), b(10);
  const auto va = synthetic_vectors(spec, a);
  EXPECT_EQ(va, synthetic_vectors(spec, b));
  EXPECT_EQ(va.size(), 20u);
  for (const auto& v : va) EXPECT_EQ(v.size(), spec.dimension);
  spec.similarity = 1.5;
  EXPECT_EQ(code_of([&] { (void)synthetic_vectors(spec, a); }), ErrorCode::InvalidInput);
}

TEST(Synthetic, SimilarityRaisesOverlap) {
  auto mean_cos = [](double similarity) {
    SyntheticSpec spec;
    spec.items = 60;
    spec.clusters = 1;
    spec.similarity = similarity;
    RngStream rng(11);
    const auto v = synthetic_vectors(spec, rng);
    double s = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = i + 1; j < v.size(); ++j) {
        double d = 0, ni = 0, nj = 0;
        for (std::size_t a = 0; a < v[i].size(); ++a) {
          d += v[i][a] * v[j][a];
          ni += v[i][a] * v[i][a];
          nj += v[j][a] * v[j][a];
        }
        s += d / std::sqrt(ni * nj);
        ++n;
      }
    return s / n;
  };
  EXPECT_GT(mean_cos(0.9), mean_cos(0.1) + 0.3);
}

}  // namespace
}  // namespace detsamp
