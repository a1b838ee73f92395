// Copyright 2026 The detsamp Authors
// SPDX-License-Identifier: Apache-2.0

#include "detsamp/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "detsamp/error.hpp"

namespace detsamp {

namespace {

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

// Applies the rotation zeroing a(p,q) to both sides of `a` and accumulates it in `v`.
void rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
  const double apq = a(p, q);
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const std::size_t n = a.rows();

  for (std::size_t k = 0; k < n; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;

  for (std::size_t k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

}  // namespace

EigenDecomposition symmetric_eig(const Matrix& h, const JacobiOptions& opts) {
  if (h.rows() != h.cols() || h.empty()) {
    throw Error(ErrorCode::InvalidShape, "eigensolver needs a square matrix");
  }
  if (!h.all_finite()) throw Error(ErrorCode::InvalidInput, "matrix has non-finite entries");
  const std::size_t n = h.rows();
  const double sym_tol = opts.symmetry_tolerance * std::max(1.0, h.max_abs());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(h(i, j) - h(j, i)) > sym_tol) {
        throw Error(ErrorCode::NotSymmetric, "entry (" + std::to_string(i) + "," +
                                                 std::to_string(j) + ") differs from its transpose");
      }

  Matrix a = h;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) a(i, j) = a(j, i) = 0.5 * (h(i, j) + h(j, i));
  Matrix v = Matrix::identity(n);
  const double threshold = opts.relative_tolerance * a.norm_frobenius();

  bool converged = off_diagonal_norm(a) <= threshold;
  for (int sweep = 0; sweep < opts.max_sweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q)
        if (a(p, q) != 0.0) rotate(a, v, p, q);
    converged = off_diagonal_norm(a) <= threshold;
  }
  if (!converged) {
    throw Error(ErrorCode::NoConvergence,
                "Jacobi did not converge in " + std::to_string(opts.max_sweeps) + " sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });

  EigenDecomposition out{std::vector<double>(n), Matrix(n, n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
  }
  return out;
}

void orthonormalize_columns(Matrix& a) {
  const std::size_t rows = a.rows();
  const std::size_t cols = a.cols();
  std::vector<double> col(rows);
  for (std::size_t j = 0; j < cols; ++j) {
    double original = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      col[r] = a(r, j);
      original += col[r] * col[r];
    }
    original = std::sqrt(original);
    // Two passes (twice is enough).
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < j; ++i) {
        double proj = 0.0;
        for (std::size_t r = 0; r < rows; ++r) proj += a(r, i) * col[r];
        for (std::size_t r = 0; r < rows; ++r) col[r] -= proj * a(r, i);
      }
    }
    double norm = 0.0;
    for (double x : col) norm += x * x;
    norm = std::sqrt(norm);
    if (!(norm > 1e-14 * original) || norm == 0.0) {
      throw Error(ErrorCode::InvalidShape, "columns are linearly dependent");
    }
    for (std::size_t r = 0; r < rows; ++r) a(r, j) = col[r] / norm;
  }
}

OrbitalMatrix random_orthonormal(std::size_t sites, std::size_t particles, RngStream& rng) {
  if (particles == 0 || particles > sites) {
    throw Error(ErrorCode::InvalidShape, "need 1 <= N <= L, got N=" + std::to_string(particles) +
                                             ", L=" + std::to_string(sites));
  }
  Matrix a(sites, particles);
  for (double& x : a.data()) x = rng.normal();
  orthonormalize_columns(a);
  return OrbitalMatrix(std::move(a));
}

double determinant(const Matrix& input) {
  if (input.rows() != input.cols()) throw Error(ErrorCode::InvalidShape, "determinant of non-square");
  Matrix a = input;
  const std::size_t n = a.rows();
  double det = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (a(piv, k) == 0.0) return 0.0;
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      det = -det;
    }
    det *= a(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = a(i, k) / a(k, k);
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= f * a(k, j);
    }
  }
  return det;
}

Matrix inverse(const Matrix& input) {
  if (input.rows() != input.cols()) throw Error(ErrorCode::InvalidShape, "inverse of non-square");
  const std::size_t n = input.rows();
  Matrix a = input;
  Matrix inv = Matrix::identity(n);
  const double scale = std::max(input.max_abs(), 1e-300);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
    if (std::abs(a(piv, k)) <= 1e-300 * scale || a(piv, k) == 0.0) {
      throw Error(ErrorCode::IllConditioned, "matrix is singular");
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(k, j), a(piv, j));
        std::swap(inv(k, j), inv(piv, j));
      }
    }
    const double d = 1.0 / a(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      a(k, j) *= d;
      inv(k, j) *= d;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k) continue;
      const double f = a(i, k);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

Matrix submatrix(const Matrix& a, const std::vector<std::size_t>& rows,
                 const std::vector<std::size_t>& cols) {
  Matrix out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = a(rows[i], cols[j]);
  return out;
}

}  // namespace detsamp
