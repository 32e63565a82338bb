#pragma once

// Dense real matrix, double precision.
//
// Storage is column-major: entry (i, j) lives at data()[i + j * rows()], and
// each column is a contiguous span. Every factorization in the library walks
// columns, so this keeps the vector kernels on unit stride. The on-disk binary
// format is row-major; matrix_io converts.

#include <cstddef>
#include <initializer_list>
#include <string>
#include <span>
#include <vector>

namespace raidkit {

class DenseMatrix {
 public:
  DenseMatrix() = default;

  /// Zero-filled rows x cols matrix.
  DenseMatrix(std::size_t rows, std::size_t cols);

  /// Row-major nested literal, e.g. {{1, 2}, {3, 4}}. Rows must be equal length.
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  /// Takes ownership of column-major entries; rejects size mismatch and NaN/Inf.
  static DenseMatrix from_col_major(std::size_t rows, std::size_t cols, std::vector<double> entries);
  /// Copies row-major entries; rejects size mismatch and NaN/Inf.
  static DenseMatrix from_row_major(std::size_t rows, std::size_t cols, std::span<const double> entries);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix diagonal(std::span<const double> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i + j * rows_]; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i + j * rows_]; }

  std::span<double> col(std::size_t j) noexcept { return {data_.data() + j * rows_, rows_}; }
  std::span<const double> col(std::size_t j) const noexcept {
    return {data_.data() + j * rows_, rows_};
  }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  DenseMatrix transpose() const;
  DenseMatrix block(std::size_t row0, std::size_t col0, std::size_t nrows, std::size_t ncols) const;
  DenseMatrix columns(std::span<const std::size_t> indices) const;
  DenseMatrix row_range(std::size_t row0, std::size_t nrows) const;

  std::vector<double> to_row_major() const;

  double max_abs() const noexcept;
  double frobenius_norm() const noexcept;
  bool all_finite() const noexcept;

  DenseMatrix& operator+=(const DenseMatrix& other);
  DenseMatrix& operator-=(const DenseMatrix& other);
  DenseMatrix& operator*=(double alpha) noexcept;

  friend DenseMatrix operator+(DenseMatrix a, const DenseMatrix& b) { return a += b; }
  friend DenseMatrix operator-(DenseMatrix a, const DenseMatrix& b) { return a -= b; }
  friend DenseMatrix operator*(DenseMatrix a, double alpha) { return a *= alpha; }
  friend DenseMatrix operator*(double alpha, DenseMatrix a) { return a *= alpha; }

  /// Bitwise equality of shape and entries.
  friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// "3x4", for error messages.
std::string shape_string(const DenseMatrix& m);

}  // namespace raidkit
