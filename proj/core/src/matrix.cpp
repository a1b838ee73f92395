// Copyright 2026 The detsamp Authors
// SPDX-License-Identifier: Apache-2.0

#include "detsamp/matrix.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "detsamp/error.hpp"

namespace detsamp {

namespace {

void check_shape(std::size_t rows, std::size_t cols) {
  if (rows == 0 || cols == 0) {
    throw Error(ErrorCode::InvalidShape, "matrix dimensions must be positive");
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <class T>
T parse_number(std::string_view token, std::size_t line) {
  token = trim(token);
  T value{};
  const auto* first = token.data();
  const auto* last = token.data() + token.size();
  if (!token.empty() && token.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || token.empty()) {
    throw Error(ErrorCode::InvalidInput,
                "line " + std::to_string(line) + ": cannot parse '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {
  check_shape(rows, cols);
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  check_shape(rows, cols);
  if (data_.size() != rows * cols) {
    throw Error(ErrorCode::InvalidShape, "entry count does not match rows*cols");
  }
  if (!all_finite()) throw Error(ErrorCode::InvalidInput, "matrix has non-finite entries");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const double> values) {
  Matrix m(values.size(), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

std::vector<double> Matrix::column(std::size_t c) const {
  std::vector<double> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

double Matrix::norm_inf() const noexcept {
  double best = 0.0;
  for (std::size_t r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (double v : row(r)) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

double Matrix::norm_frobenius() const noexcept {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

double Matrix::max_abs() const noexcept {
  double best = 0.0;
  for (double v : data_) best = std::max(best, std::abs(v));
  return best;
}

bool Matrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "matrix product shapes");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

double orthonormality_defect(const Matrix& a) {
  double worst = 0.0;
  for (std::size_t p = 0; p < a.cols(); ++p) {
    for (std::size_t q = p; q < a.cols(); ++q) {
      double s = 0.0;
      for (std::size_t r = 0; r < a.rows(); ++r) s += a(r, p) * a(r, q);
      worst = std::max(worst, std::abs(s - (p == q ? 1.0 : 0.0)));
    }
  }
  return worst;
}

OrbitalMatrix::OrbitalMatrix(Matrix u, double tolerance) : u_(std::move(u)) {
  if (u_.empty()) throw Error(ErrorCode::InvalidShape, "orbital matrix is empty");
  if (u_.cols() > u_.rows()) {
    throw Error(ErrorCode::InvalidShape, "more orbitals (" + std::to_string(u_.cols()) +
                                             ") than sites (" + std::to_string(u_.rows()) + ")");
  }
  if (!u_.all_finite()) throw Error(ErrorCode::InvalidInput, "orbital matrix has non-finite entries");
  const double defect = orthonormality_defect(u_);
  if (!(defect <= tolerance)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g", defect);
    throw Error(ErrorCode::NotOrthonormal, std::string("max |U^T U - I| = ") + buf);
  }
}

std::vector<double> OrbitalMatrix::kernel_diagonal() const {
  std::vector<double> d(sites());
  for (std::size_t x = 0; x < sites(); ++x) {
    double s = 0.0;
    for (double v : row(x)) s += v * v;
    d[x] = s;
  }
  return d;
}

void write_matrix_csv(std::ostream& os, const Matrix& m) {
  os << m.rows() << ',' << m.cols() << '\n';
  char buf[32];
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", m(r, c));
      if (c) os << ',';
      os << buf;
    }
    os << '\n';
  }
}

std::string matrix_to_csv(const Matrix& m) {
  std::ostringstream os;
  write_matrix_csv(os, m);
  return os.str();
}

Matrix read_matrix_csv(std::istream& is) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(is, line)) throw Error(ErrorCode::InvalidInput, "empty matrix file");
  const std::string_view header = trim(line);
  const auto comma = header.find(',');
  if (comma == std::string_view::npos) {
    throw Error(ErrorCode::InvalidInput, "header must be 'rows,cols'");
  }
  const auto rows = parse_number<std::size_t>(header.substr(0, comma), line_no);
  const auto cols = parse_number<std::size_t>(header.substr(comma + 1), line_no);
  check_shape(rows, cols);

  std::vector<double> entries;
  entries.reserve(rows * cols);
  std::size_t read_rows = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::string_view rest = trim(line);
    if (rest.empty()) continue;
    if (read_rows == rows) throw Error(ErrorCode::InvalidInput, "more rows than declared");
    std::size_t count = 0;
    while (true) {
      const auto next = rest.find(',');
      entries.push_back(parse_number<double>(rest.substr(0, next), line_no));
      ++count;
      if (next == std::string_view::npos) break;
      rest.remove_prefix(next + 1);
    }
    if (count != cols) {
      throw Error(ErrorCode::InvalidInput, "line " + std::to_string(line_no) + ": expected " +
                                               std::to_string(cols) + " entries");
    }
    ++read_rows;
  }
  if (read_rows != rows) throw Error(ErrorCode::InvalidInput, "fewer rows than declared");
  return Matrix(rows, cols, std::move(entries));
}

Matrix parse_matrix_csv(const std::string& text) {
  std::istringstream is(text);
  return read_matrix_csv(is);
}

Matrix load_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot open " + path.string());
  return read_matrix_csv(in);
}

}  // namespace detsamp
