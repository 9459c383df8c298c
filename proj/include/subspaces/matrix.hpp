#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace subspaces {

// Dense real matrix, row-major storage. Entries are required to be finite;
// constructors taking user data validate this.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);  // zero-filled
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static Matrix identity(std::size_t n);
  static Matrix diagonal(const std::vector<double>& d);
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<double>& data() const { return data_; }

  Matrix transposed() const;
  Matrix col(std::size_t j) const;
  Matrix cols(const std::vector<std::size_t>& indices) const;
  void set_col(std::size_t j, const Matrix& column);

  Matrix scaled(double s) const;

  double frobenius_norm() const;
  double max_abs() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend bool operator==(const Matrix& a, const Matrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Column-wise concatenation; row counts must agree.
Matrix hcat(const Matrix& a, const Matrix& b);
// Row-wise concatenation; column counts must agree.
Matrix vcat(const Matrix& a, const Matrix& b);
// Block-diagonal assembly.
Matrix block_diag(const Matrix& a, const Matrix& b);

}  // namespace subspaces
