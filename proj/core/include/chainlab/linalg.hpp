#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace chainlab {

inline constexpr double kPivotEps = 1e-12;

/// Dense row-major matrix of doubles. Zero-sized matrices are valid and
/// represent the empty blocks of a partitioned transition matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<const double> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

  Matrix transposed() const;
  std::vector<double> row_sums() const;
  std::vector<std::vector<double>> to_rows() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator+(const Matrix& a, const Matrix& b);

/// Row vector times matrix: out_j = sum_i v_i * m(i, j).
std::vector<double> left_multiply(std::span<const double> v, const Matrix& m);

double max_abs_diff(const Matrix& a, const Matrix& b);
double max_abs_diff(std::span<const double> a, std::span<const double> b);

/// LU factorization with partial (row) pivoting: P·A = L·U, with L unit lower
/// triangular. Throws ChainError(SingularMatrix) on a pivot below `pivot_eps`
/// unless constructed with `allow_singular`.
class LuDecomposition {
 public:
  explicit LuDecomposition(const Matrix& a, double pivot_eps = kPivotEps);

  std::size_t size() const noexcept { return lu_.rows(); }
  double determinant() const noexcept { return determinant_; }
  double min_abs_pivot() const noexcept { return min_pivot_; }

  std::vector<double> solve(std::span<const double> rhs) const;
  /// Solves A·X = I one column at a time.
  Matrix inverse() const;

 private:
  Matrix lu_;
  std::vector<std::size_t> perm_;
  double determinant_ = 1.0;
  double min_pivot_ = 0.0;
};

}  // namespace chainlab
