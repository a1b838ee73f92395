// Copyright 2026 The detsamp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

#include "detsamp/matrix.hpp"
#include "detsamp/rng.hpp"

namespace detsamp {

struct EigenDecomposition {
  std::vector<double> values;  ///< ascending
  Matrix vectors;              ///< column k belongs to values[k]
};

struct JacobiOptions {
  int max_sweeps = 100;
  double relative_tolerance = 1e-12;  ///< on off-diagonal Frobenius norm vs ||H||_F
  double symmetry_tolerance = 1e-10;
};

/// Cyclic Jacobi eigensolver for a dense symmetric matrix.
/// Throws NotSymmetric or NoConvergence.
[[nodiscard]] EigenDecomposition symmetric_eig(const Matrix& h, const JacobiOptions& opts = {});

/// Orthonormalizes the columns of `a` in place by modified Gram-Schmidt with
/// one reorthogonalization pass. Throws InvalidShape on rank deficiency.
void orthonormalize_columns(Matrix& a);

/// Orbital matrix from an L x N matrix of independent standard normals.
[[nodiscard]] OrbitalMatrix random_orthonormal(std::size_t sites, std::size_t particles,
                                               RngStream& rng);

/// Square-matrix determinant by partial-pivot LU; zero for singular input.
[[nodiscard]] double determinant(const Matrix& a);

/// Inverse by Gauss-Jordan with partial pivoting; throws IllConditioned when
/// a pivot vanishes.
[[nodiscard]] Matrix inverse(const Matrix& a);

/// Rows `rows` and columns `cols` of `a`.
[[nodiscard]] Matrix submatrix(const Matrix& a, const std::vector<std::size_t>& rows,
                               const std::vector<std::size_t>& cols);

}  // namespace detsamp
