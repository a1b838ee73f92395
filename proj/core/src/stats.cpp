// Copyright 2026 The detsamp Authors
// SPDX-License-Identifier: Apache-2.0

#include "detsamp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>

#include "detsamp/error.hpp"

namespace detsamp {

AcfCurve acf(std::span<const double> series, std::size_t cutoff) {
  const std::size_t n = series.size();
  if (n <= cutoff) {
    throw Error(ErrorCode::SeriesTooShort, "series of length " + std::to_string(n) +
                                               " too short for cutoff " + std::to_string(cutoff));
  }
  const double mu = mean(series);
  std::vector<double> centred(n);
  for (std::size_t k = 0; k < n; ++k) centred[k] = series[k] - mu;
  AcfCurve curve;
  curve.values.resize(cutoff + 1);
  for (std::size_t i = 0; i <= cutoff; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k + i < n; ++k) s += centred[k] * centred[k + i];
    curve.values[i] = s / static_cast<double>(n - i);
  }
  return curve;
}

std::size_t default_acf_cutoff(std::size_t series_length) noexcept {
  return std::min<std::size_t>(series_length / 10, 500);
}

double acl_sum(const AcfCurve& curve) {
  if (curve.values.empty() || !(curve.values[0] > 0.0)) {
    throw Error(ErrorCode::ZeroVariance, "c(0) must be positive");
  }
  double tau = 0.0;
  for (double c : curve.values) tau += c / curve.values[0];
  return tau;
}

double acl_logfit(const AcfCurve& curve) {
  std::size_t m = 0;
  while (m < curve.values.size() && curve.values[m] > 0.0) ++m;
  if (m < 3) {
    throw Error(ErrorCode::InsufficientPositiveLags,
                "need at least 3 leading positive lags, have " + std::to_string(m));
  }
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sx += static_cast<double>(i);
    sy += std::log(curve.values[i]);
  }
  const double mx = sx / static_cast<double>(m);
  const double my = sy / static_cast<double>(m);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double dx = static_cast<double>(i) - mx;
    sxy += dx * (std::log(curve.values[i]) - my);
    sxx += dx * dx;
  }
  const double slope = sxy / sxx;
  if (!(slope < 0.0)) throw Error(ErrorCode::ZeroVariance, "log-ACF slope is not negative");
  return -1.0 / slope;
}

double trial_rms_error(std::span<const double> trial_means, double reference) {
  if (trial_means.size() < 2) throw Error(ErrorCode::TooFewTrials, "need at least 2 trials");
  double s = 0.0;
  for (double m : trial_means) s += (m - reference) * (m - reference);
  return std::sqrt(s / static_cast<double>(trial_means.size()));
}

TrialReport trial_report(std::span<const double> trial_means) {
  if (trial_means.size() < 2) throw Error(ErrorCode::TooFewTrials, "need at least 2 trials");
  return trial_report(trial_means, mean(trial_means));
}

TrialReport trial_report(std::span<const double> trial_means, double reference) {
  TrialReport r;
  r.per_trial_means.assign(trial_means.begin(), trial_means.end());
  r.reference = reference;
  r.rms_error = trial_rms_error(trial_means, reference);
  return r;
}

double error_ratio(double markov_error, double ffs_error) {
  if (!(ffs_error > 0.0)) throw Error(ErrorCode::DivisionByZero, "FFS error must be positive");
  return markov_error / ffs_error;
}

double mean(std::span<const double> xs) {
  if (xs.empty()) throw Error(ErrorCode::InvalidInput, "mean of an empty series");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double variance(std::span<const double> xs) {
  if (xs.size() < 2) throw Error(ErrorCode::InvalidInput, "variance needs at least 2 values");
  const double mu = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - mu) * (x - mu);
  return s / static_cast<double>(xs.size() - 1);
}

double standard_error(std::span<const double> xs) {
  return std::sqrt(variance(xs) / static_cast<double>(xs.size()));
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw Error(ErrorCode::DimensionMismatch, "distributions differ in length");
  const double sp = std::accumulate(p.begin(), p.end(), 0.0);
  const double sq = std::accumulate(q.begin(), q.end(), 0.0);
  if (!(sp > 0.0) || !(sq > 0.0)) throw Error(ErrorCode::InvalidInput, "distributions must have positive mass");
  double tv = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) tv += std::abs(p[i] / sp - q[i] / sq);
  return 0.5 * tv;
}

namespace {

double chi_square_upper_tail(double statistic, std::size_t dof) {
  if (dof == 0) return 1.0;
  if (!std::isfinite(statistic)) return 0.0;
  const boost::math::chi_squared_distribution<double> dist(static_cast<double>(dof));
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

}  // namespace

ChiSquareResult chi_square_gof(std::span<const double> counts, std::span<const double> probabilities) {
  if (counts.size() != probabilities.size()) {
    throw Error(ErrorCode::DimensionMismatch, "counts and probabilities differ in length");
  }
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  const double mass = std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
  if (!(total > 0.0) || !(mass > 0.0)) throw Error(ErrorCode::InvalidInput, "empty counts or probabilities");

  std::vector<double> obs;
  std::vector<double> exp;
  double pool_obs = 0.0, pool_exp = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double e = total * probabilities[i] / mass;
    if (e >= 5.0) {
      obs.push_back(counts[i]);
      exp.push_back(e);
    } else {
      pool_obs += counts[i];
      pool_exp += e;
    }
  }
  if (pool_obs > 0.0 || pool_exp > 0.0) {
    if (pool_exp >= 5.0 || exp.empty()) {
      obs.push_back(pool_obs);
      exp.push_back(pool_exp);
    } else {
      const auto smallest = static_cast<std::size_t>(std::min_element(exp.begin(), exp.end()) - exp.begin());
      obs[smallest] += pool_obs;
      exp[smallest] += pool_exp;
    }
  }

  ChiSquareResult r;
  for (std::size_t i = 0; i < obs.size(); ++i) {
    if (exp[i] > 0.0) {
      r.statistic += (obs[i] - exp[i]) * (obs[i] - exp[i]) / exp[i];
    } else if (obs[i] > 0.0) {
      r.statistic = std::numeric_limits<double>::infinity();
    }
  }
  r.dof = obs.size() > 1 ? obs.size() - 1 : 0;
  r.p_value = chi_square_upper_tail(r.statistic, r.dof);
  return r;
}

ChiSquareResult chi_square_two_sample(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "count vectors differ in length");
  const double na = std::accumulate(a.begin(), a.end(), 0.0);
  const double nb = std::accumulate(b.begin(), b.end(), 0.0);
  if (!(na > 0.0) || !(nb > 0.0)) throw Error(ErrorCode::InvalidInput, "both samples must be non-empty");

  // Bins with fewer than 10 combined counts are pooled.
  std::vector<double> xa, xb;
  double pa = 0.0, pb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] + b[i] >= 10.0) {
      xa.push_back(a[i]);
      xb.push_back(b[i]);
    } else {
      pa += a[i];
      pb += b[i];
    }
  }
  if (pa + pb > 0.0) {
    xa.push_back(pa);
    xb.push_back(pb);
  }

  const double ka = std::sqrt(nb / na);
  const double kb = std::sqrt(na / nb);
  ChiSquareResult r;
  for (std::size_t i = 0; i < xa.size(); ++i) {
    const double d = ka * xa[i] - kb * xb[i];
    r.statistic += d * d / (xa[i] + xb[i]);
  }
  r.dof = xa.size() > 1 ? xa.size() - 1 : 0;
  r.p_value = chi_square_upper_tail(r.statistic, r.dof);
  return r;
}

KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw Error(ErrorCode::InvalidInput, "KS test needs samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  // Asymptotic Kolmogorov distribution with the Stephens small-sample correction.
  const double sqrt_n = std::sqrt(n);
  const double lambda = (sqrt_n + 0.12 + 0.11 / sqrt_n) * d;
  double q = 0.0;
  if (lambda < 0.2) {
    q = 1.0;
  } else {
    double sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
      const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
      q += term;
      if (std::abs(term) < 1e-16) break;
      sign = -sign;
    }
    q = std::clamp(2.0 * q, 0.0, 1.0);
  }
  return {d, q};
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "series differ in length");
  if (x.size() < 2) throw Error(ErrorCode::InvalidInput, "correlation needs at least 2 points");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw Error(ErrorCode::ZeroVariance, "constant series");
  return sxy / std::sqrt(sxx * syy);
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> rank(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) rank[order[k]] = r;
    i = j + 1;
  }
  return rank;
}

}  // namespace

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "series differ in length");
  const auto rx = average_ranks(x);
  const auto ry = average_ranks(y);
  return pearson(rx, ry);
}

}  // namespace detsamp
