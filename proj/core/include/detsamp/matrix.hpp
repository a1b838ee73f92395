// Copyright 2026 The detsamp Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace detsamp {

/// Dense row-major real matrix with finite entries.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  /// Takes ownership of row-major `entries`; throws InvalidShape/InvalidInput.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> values);

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  [[nodiscard]] std::span<const double> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }

  [[nodiscard]] std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  [[nodiscard]] Matrix transpose() const;
  [[nodiscard]] std::vector<double> column(std::size_t c) const;

  /// Max-row-sum norm.
  [[nodiscard]] double norm_inf() const noexcept;
  [[nodiscard]] double norm_frobenius() const noexcept;
  [[nodiscard]] double max_abs() const noexcept;

  [[nodiscard]] bool all_finite() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

[[nodiscard]] Matrix operator*(const Matrix& a, const Matrix& b);

/// max |(A^T A - I)_{ab}|.
[[nodiscard]] double orthonormality_defect(const Matrix& a);

/**
 * L x N matrix whose N columns are orthonormal single-particle orbitals.
 * Row x is the orbital row u_x of site x. Construction validates N <= L and
 * max |U^T U - I| <= tolerance.
 */
class OrbitalMatrix {
 public:
  static constexpr double kTolerance = 1e-10;

  explicit OrbitalMatrix(Matrix u, double tolerance = kTolerance);

  [[nodiscard]] std::size_t sites() const noexcept { return u_.rows(); }
  [[nodiscard]] std::size_t particles() const noexcept { return u_.cols(); }
  [[nodiscard]] std::span<const double> row(std::size_t site) const noexcept { return u_.row(site); }
  double operator()(std::size_t site, std::size_t orbital) const noexcept {
    return u_(site, orbital);
  }
  [[nodiscard]] const Matrix& matrix() const noexcept { return u_; }

  /// Diagonal of the projection kernel U U^T.
  [[nodiscard]] std::vector<double> kernel_diagonal() const;

 private:
  Matrix u_;
};

// CSV matrix format: first line "rows,cols", then one line per row with
// comma-separated entries written with 17 significant digits.
void write_matrix_csv(std::ostream& os, const Matrix& m);
[[nodiscard]] std::string matrix_to_csv(const Matrix& m);
[[nodiscard]] Matrix read_matrix_csv(std::istream& is);
[[nodiscard]] Matrix parse_matrix_csv(const std::string& text);
[[nodiscard]] Matrix load_matrix_csv(const std::filesystem::path& path);

}  // namespace detsamp
