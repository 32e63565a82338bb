#include "raidkit/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "raidkit/error.hpp"
#include "raidkit/kernels.hpp"

namespace raidkit {
namespace {

void require_finite(std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw ContractViolation("matrix entry " + std::to_string(i) + " is not finite");
    }
  }
}

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ContractViolation(std::string(op) + ": shape mismatch " + shape_string(a) + " vs " +
                            shape_string(b));
  }
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.assign(rows_ * cols_, 0.0);
  std::size_t i = 0;
  for (const auto& row : rows) {
    if (row.size() != cols_) throw ContractViolation("ragged matrix literal");
    std::size_t j = 0;
    for (double v : row) (*this)(i, j++) = v;
    ++i;
  }
  require_finite(data_);
}

DenseMatrix DenseMatrix::from_col_major(std::size_t rows, std::size_t cols,
                                        std::vector<double> entries) {
  if (entries.size() != rows * cols) {
    throw ContractViolation("expected " + std::to_string(rows * cols) + " entries for a " +
                            std::to_string(rows) + "x" + std::to_string(cols) + " matrix, got " +
                            std::to_string(entries.size()));
  }
  require_finite(entries);
  DenseMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.data_ = std::move(entries);
  return m;
}

DenseMatrix DenseMatrix::from_row_major(std::size_t rows, std::size_t cols,
                                        std::span<const double> entries) {
  if (entries.size() != rows * cols) {
    throw ContractViolation("expected " + std::to_string(rows * cols) + " entries for a " +
                            std::to_string(rows) + "x" + std::to_string(cols) + " matrix, got " +
                            std::to_string(entries.size()));
  }
  require_finite(entries);
  DenseMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = entries[i * cols + j];
  }
  return m;
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> diag) {
  DenseMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  // Blocked to keep both access patterns cache friendly on tall inputs.
  constexpr std::size_t kBlock = 32;
  for (std::size_t j0 = 0; j0 < cols_; j0 += kBlock) {
    const std::size_t j1 = std::min(cols_, j0 + kBlock);
    for (std::size_t i0 = 0; i0 < rows_; i0 += kBlock) {
      const std::size_t i1 = std::min(rows_, i0 + kBlock);
      for (std::size_t j = j0; j < j1; ++j) {
        for (std::size_t i = i0; i < i1; ++i) t(j, i) = (*this)(i, j);
      }
    }
  }
  return t;
}

DenseMatrix DenseMatrix::block(std::size_t row0, std::size_t col0, std::size_t nrows,
                               std::size_t ncols) const {
  if (row0 + nrows > rows_ || col0 + ncols > cols_) {
    throw ContractViolation("block out of range for " + shape_string(*this));
  }
  DenseMatrix b(nrows, ncols);
  for (std::size_t j = 0; j < ncols; ++j) {
    const auto src = col(col0 + j).subspan(row0, nrows);
    std::copy(src.begin(), src.end(), b.col(j).begin());
  }
  return b;
}

DenseMatrix DenseMatrix::columns(std::span<const std::size_t> indices) const {
  DenseMatrix b(rows_, indices.size());
  for (std::size_t j = 0; j < indices.size(); ++j) {
    if (indices[j] >= cols_) {
      throw ContractViolation("column index " + std::to_string(indices[j]) + " out of range for " +
                              shape_string(*this));
    }
    const auto src = col(indices[j]);
    std::copy(src.begin(), src.end(), b.col(j).begin());
  }
  return b;
}

DenseMatrix DenseMatrix::row_range(std::size_t row0, std::size_t nrows) const {
  return block(row0, 0, nrows, cols_);
}

std::vector<double> DenseMatrix::to_row_major() const {
  std::vector<double> out(data_.size());
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out[i * cols_ + j] = (*this)(i, j);
  }
  return out;
}

double DenseMatrix::max_abs() const noexcept {
  double best = 0.0;
  for (double v : data_) best = std::max(best, std::abs(v));
  return best;
}

double DenseMatrix::frobenius_norm() const noexcept {
  double sum = 0.0;
  for (std::size_t j = 0; j < cols_; ++j) sum += kernels::sumsq(col(j));
  return std::sqrt(sum);
}

bool DenseMatrix::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

DenseMatrix& DenseMatrix::operator+=(const DenseMatrix& other) {
  require_same_shape(*this, other, "add");
  kernels::axpy(1.0, other.data_, data_);
  return *this;
}

DenseMatrix& DenseMatrix::operator-=(const DenseMatrix& other) {
  require_same_shape(*this, other, "subtract");
  kernels::axpy(-1.0, other.data_, data_);
  return *this;
}

DenseMatrix& DenseMatrix::operator*=(double alpha) noexcept {
  kernels::scal(alpha, data_);
  return *this;
}

std::string shape_string(const DenseMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace raidkit
