// Copyright 2026 The detsamp Authors
// SPDX-License-Identifier: Apache-2.0

#include "detsamp/dpp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "detsamp/error.hpp"
#include "detsamp/ffs.hpp"

namespace detsamp {

namespace {

constexpr double kUnitTolerance = 1e-8;
constexpr double kTieTolerance = 1e-12;

double norm(const FeatureVector& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void check_vectors(const std::vector<FeatureVector>& vectors) {
  if (vectors.empty()) return;
  const std::size_t dim = vectors.front().size();
  for (const auto& v : vectors) {
    if (v.size() != dim) throw Error(ErrorCode::DimensionMismatch, "feature vectors differ in length");
    for (double x : v)
      if (!std::isfinite(x)) throw Error(ErrorCode::InvalidInput, "feature vector entries must be finite");
  }
}

}  // namespace

Kernel::Kernel(Matrix c) : c_(std::move(c)) {
  if (c_.rows() != c_.cols()) throw Error(ErrorCode::InvalidShape, "kernel must be square");
  if (!c_.all_finite()) throw Error(ErrorCode::InvalidInput, "kernel entries must be finite");
  const double tol = kSymmetryTolerance * std::max(1.0, c_.max_abs());
  const std::size_t n = c_.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(c_(i, j) - c_(j, i)) > tol) {
        throw Error(ErrorCode::NotSymmetric, "kernel is not symmetric");
      }
      const double m = 0.5 * (c_(i, j) + c_(j, i));
      c_(i, j) = m;
      c_(j, i) = m;
    }
  }
}

Kernel kernel_from_vectors(const std::vector<FeatureVector>& vectors) {
  if (vectors.empty()) throw Error(ErrorCode::InvalidInput, "no feature vectors");
  check_vectors(vectors);
  const std::size_t n = vectors.size();
  Matrix c(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t a = 0; a < vectors[i].size(); ++a) s += vectors[i][a] * vectors[j][a];
      c(i, j) = s;
      c(j, i) = s;
    }
  }
  return Kernel(std::move(c));
}

DppSampler::DppSampler(const Kernel& kernel) {
  EigenDecomposition eig = symmetric_eig(kernel.matrix());
  const std::size_t n = eig.values.size();
  values_.resize(n);
  vectors_ = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = n - 1 - k;
    double lambda = eig.values[src];
    if (lambda < 0.0) {
      if (lambda < -Kernel::kNegativeClamp) {
        throw Error(ErrorCode::NegativeEigenvalue, "kernel eigenvalue " + std::to_string(lambda));
      }
      lambda = 0.0;
    }
    values_[k] = lambda;
    for (std::size_t i = 0; i < n; ++i) vectors_(i, k) = eig.vectors(i, src);
  }
}

double DppSampler::expected_size() const noexcept {
  double s = 0.0;
  for (double l : values_) s += l / (l + 1.0);
  return s;
}

std::vector<std::size_t> DppSampler::sample(RngStream& rng, FlopLedger& ledger) const {
  std::vector<std::size_t> picked;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    const double l = values_[k];
    if (rng.uniform() < l / (l + 1.0)) picked.push_back(k);
  }
  if (picked.empty()) return {};
  const std::size_t n = vectors_.rows();
  Matrix u(n, picked.size());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < picked.size(); ++c) u(i, c) = vectors_(i, picked[c]);
  return sorted_config(ffs_sample(OrbitalMatrix(std::move(u)), rng, ledger));
}

std::vector<std::size_t> sample_dpp(const Kernel& kernel, RngStream& rng, FlopLedger& ledger) {
  return DppSampler(kernel).sample(rng, ledger);
}

std::size_t mbr_select(const std::vector<FeatureVector>& candidates) {
  if (candidates.empty()) throw Error(ErrorCode::EmptyCandidates, "no candidates");
  check_vectors(candidates);
  for (const auto& v : candidates) {
    if (std::abs(norm(v) - 1.0) > kUnitTolerance) {
      throw Error(ErrorCode::InvalidInput, "candidate vectors must have unit norm");
    }
  }
  // sum_j v_i . v_j = v_i . (sum_j v_j)
  FeatureVector total(candidates.front().size(), 0.0);
  for (const auto& v : candidates)
    for (std::size_t a = 0; a < v.size(); ++a) total[a] += v[a];
  const double m = static_cast<double>(candidates.size());
  std::vector<double> score(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    double s = 0.0;
    for (std::size_t a = 0; a < total.size(); ++a) s += candidates[i][a] * total[a];
    score[i] = s / m;
  }
  const double best = *std::max_element(score.begin(), score.end());
  for (std::size_t i = 0; i < score.size(); ++i)
    if (score[i] >= best - kTieTolerance) return i;
  return 0;
}

FeatureVector subset_representative(const std::vector<FeatureVector>& items,
                                    const std::vector<std::size_t>& subset) {
  if (subset.empty() || items.empty()) return {};
  FeatureVector mean(items.front().size(), 0.0);
  for (auto i : subset) {
    if (i >= items.size()) throw Error(ErrorCode::InvalidInput, "subset index out of range");
    for (std::size_t a = 0; a < mean.size(); ++a) mean[a] += items[i][a];
  }
  const double len = norm(mean);
  if (!(len > 0.0)) return {};
  for (double& x : mean) x /= len;
  return mean;
}

std::vector<FeatureVector> vectors_from_kernel(const Kernel& kernel) {
  const DppSampler spectrum(kernel);
  const auto& values = spectrum.eigenvalues();
  const EigenDecomposition eig = symmetric_eig(kernel.matrix());
  const std::size_t n = kernel.size();
  std::vector<FeatureVector> out(n, FeatureVector(n, 0.0));
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = n - 1 - k;
    const double s = std::sqrt(values[k]);
    for (std::size_t i = 0; i < n; ++i) out[i][k] = s * eig.vectors(i, src);
  }
  return out;
}

std::vector<FeatureVector> synthetic_vectors(const SyntheticSpec& spec, RngStream& rng) {
  if (spec.items == 0 || spec.dimension == 0 || spec.clusters == 0) {
    throw Error(ErrorCode::InvalidInput, "items, dimension and clusters must be positive");
  }
  if (!(spec.similarity >= 0.0 && spec.similarity <= 1.0)) {
    throw Error(ErrorCode::InvalidInput, "similarity must lie in [0, 1]");
  }
  if (!(spec.magnitude_spread >= 0.0) || !std::isfinite(spec.magnitude_spread) ||
      !(spec.magnitude_scale > 0.0) || !std::isfinite(spec.magnitude_scale)) {
    throw Error(ErrorCode::InvalidInput, "magnitude parameters must be finite, scale positive");
  }
  auto random_unit = [&] {
    FeatureVector v(spec.dimension);
    double len = 0.0;
    while (!(len > 0.0)) {
      for (double& x : v) x = rng.normal();
      len = norm(v);
    }
    for (double& x : v) x /= len;
    return v;
  };

  std::vector<FeatureVector> centres(spec.clusters);
  for (auto& c : centres) c = random_unit();

  std::vector<FeatureVector> out(spec.items);
  for (auto& item : out) {
    const auto& centre = centres[rng.uniform_index(spec.clusters)];
    FeatureVector noise = random_unit();
    item.resize(spec.dimension);
    for (std::size_t a = 0; a < spec.dimension; ++a) {
      item[a] = spec.similarity * centre[a] + (1.0 - spec.similarity) * noise[a];
    }
    double len = norm(item);
    if (!(len > 0.0)) {
      item = noise;
      len = 1.0;
    }
    const double magnitude = spec.magnitude_scale * std::exp(spec.magnitude_spread * rng.normal());
    for (double& x : item) x *= magnitude / len;
  }
  return out;
}

}  // namespace detsamp
