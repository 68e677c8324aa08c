#include "chainlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "chainlab/error.hpp"

namespace chainlab {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) {
      throw ChainError(ErrorCode::NonSquareMatrix, "ragged matrix literal");
    }
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) {
      throw ChainError(ErrorCode::NonSquareMatrix,
                       "row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                           " entries, expected " + std::to_string(cols));
    }
    std::copy(rows[r].begin(), rows[r].end(), m.row(r).begin());
  }
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

std::vector<double> Matrix::row_sums() const {
  std::vector<double> sums(rows_, 0.0);
  for (std::size_t r = 0; r < rows_; ++r) {
    const auto rr = row(r);
    sums[r] = std::accumulate(rr.begin(), rr.end(), 0.0);
  }
  return sums;
}

std::vector<std::vector<double>> Matrix::to_rows() const {
  std::vector<std::vector<double>> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    const auto rr = row(r);
    out[r].assign(rr.begin(), rr.end());
  }
  return out;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ChainError(ErrorCode::DimensionMismatch,
                     "cannot multiply " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + " by " + std::to_string(b.rows()) + "x" +
                         std::to_string(b.cols()));
  }
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

namespace {

template <typename Op>
Matrix elementwise(const Matrix& a, const Matrix& b, Op op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ChainError(ErrorCode::DimensionMismatch, "elementwise operands differ in shape");
  }
  Matrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = op(a(i, j), b(i, j));
  return out;
}

}  // namespace

Matrix operator-(const Matrix& a, const Matrix& b) {
  return elementwise(a, b, std::minus<>{});
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  return elementwise(a, b, std::plus<>{});
}

std::vector<double> left_multiply(std::span<const double> v, const Matrix& m) {
  if (v.size() != m.rows()) {
    throw ChainError(ErrorCode::DimensionMismatch,
                     "vector of length " + std::to_string(v.size()) + " against " +
                         std::to_string(m.rows()) + " matrix rows");
  }
  std::vector<double> out(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double vi = v[i];
    if (vi == 0.0) continue;
    const auto r = m.row(i);
    for (std::size_t j = 0; j < m.cols(); ++j) out[j] += vi * r[j];
  }
  return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    return std::numeric_limits<double>::infinity();
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      worst = std::max(worst, std::abs(a(i, j) - b(i, j)));
  return worst;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

LuDecomposition::LuDecomposition(const Matrix& a, double pivot_eps) : lu_(a) {
  if (!a.is_square()) {
    throw ChainError(ErrorCode::NonSquareMatrix, "LU factorization needs a square matrix");
  }
  const std::size_t n = a.rows();
  perm_.resize(n);
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  min_pivot_ = n == 0 ? 0.0 : std::numeric_limits<double>::infinity();

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot_row = col;
    double pivot_mag = std::abs(lu_(col, col));
    for (std::size_t r = col + 1; r < n; ++r) {
      if (const double mag = std::abs(lu_(r, col)); mag > pivot_mag) {
        pivot_mag = mag;
        pivot_row = r;
      }
    }
    min_pivot_ = std::min(min_pivot_, pivot_mag);
    if (pivot_mag < pivot_eps) {
      auto err = ChainError(ErrorCode::SingularMatrix,
                            "pivot magnitude " + std::to_string(pivot_mag) + " in column " +
                                std::to_string(col) + " is below tolerance");
      err.row = col;
      err.value = pivot_mag;
      throw err;
    }
    if (pivot_row != col) {
      std::swap_ranges(lu_.row(col).begin(), lu_.row(col).end(), lu_.row(pivot_row).begin());
      std::swap(perm_[col], perm_[pivot_row]);
      determinant_ = -determinant_;
    }
    const double pivot = lu_(col, col);
    determinant_ *= pivot;
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = lu_(r, col) / pivot;
      lu_(r, col) = factor;
      if (factor == 0.0) continue;
      for (std::size_t c = col + 1; c < n; ++c) lu_(r, c) -= factor * lu_(col, c);
    }
  }
}

std::vector<double> LuDecomposition::solve(std::span<const double> rhs) const {
  const std::size_t n = size();
  if (rhs.size() != n) {
    throw ChainError(ErrorCode::DimensionMismatch, "right-hand side length differs from system");
  }
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double acc = rhs[perm_[i]];
    for (std::size_t j = 0; j < i; ++j) acc -= lu_(i, j) * x[j];
    x[i] = acc;
  }
  for (std::size_t i = n; i-- > 0;) {
    double acc = x[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= lu_(i, j) * x[j];
    x[i] = acc / lu_(i, i);
  }
  return x;
}

Matrix LuDecomposition::inverse() const {
  const std::size_t n = size();
  Matrix inv(n, n);
  std::vector<double> unit(n, 0.0);
  for (std::size_t c = 0; c < n; ++c) {
    unit[c] = 1.0;
    const auto col = solve(unit);
    unit[c] = 0.0;
    for (std::size_t r = 0; r < n; ++r) inv(r, c) = col[r];
  }
  return inv;
}

}  // namespace chainlab
