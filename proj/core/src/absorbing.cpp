#include "chainlab/absorbing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "chainlab/classify.hpp"
#include "chainlab/error.hpp"

namespace chainlab {

std::optional<std::size_t> CanonicalForm::transient_position(std::size_t state) const {
  const auto tr = transient();
  const auto it = std::find(tr.begin(), tr.end(), state);
  if (it == tr.end()) return std::nullopt;
  return static_cast<std::size_t>(it - tr.begin());
}

std::optional<std::size_t> CanonicalForm::absorbing_position(std::size_t state) const {
  const auto ab = absorbing();
  const auto it = std::find(ab.begin(), ab.end(), state);
  if (it == ab.end()) return std::nullopt;
  return static_cast<std::size_t>(it - ab.begin());
}

CanonicalForm canonical_form(const ChainModel& model) {
  const auto report = classify(model);
  if (report.chain_type != ChainType::Absorbing) {
    throw ChainError(ErrorCode::NotAbsorbing,
                     std::string("absorbing analysis requires an absorbing chain; chain is ") +
                         to_string(report.chain_type));
  }
  const auto& a = model.matrix();
  const std::size_t n = a.size();
  CanonicalForm form;
  form.k = report.absorbing_states.size();
  form.canonical_order = report.absorbing_states;
  std::vector<bool> absorbing(n, false);
  for (auto s : report.absorbing_states) absorbing[s] = true;
  for (std::size_t i = 0; i < n; ++i)
    if (!absorbing[i]) form.canonical_order.push_back(i);

  const auto abs = form.absorbing();
  const auto tr = form.transient();
  form.R = Matrix(tr.size(), abs.size());
  form.Q = Matrix(tr.size(), tr.size());
  for (std::size_t i = 0; i < tr.size(); ++i) {
    for (std::size_t j = 0; j < abs.size(); ++j) form.R(i, j) = a(tr[i], abs[j]);
    for (std::size_t j = 0; j < tr.size(); ++j) form.Q(i, j) = a(tr[i], tr[j]);
  }
  return form;
}

Matrix fundamental_matrix(const Matrix& q) {
  if (!q.is_square()) {
    throw ChainError(ErrorCode::NonSquareMatrix, "Q must be square");
  }
  const Matrix system = Matrix::identity(q.rows()) - q;
  const LuDecomposition lu(system, kPivotEps);
  if (std::abs(lu.determinant()) < kPivotEps) {
    auto err = ChainError(ErrorCode::SingularMatrix,
                          "det(I - Q) = " + std::to_string(lu.determinant()));
    err.value = lu.determinant();
    throw err;
  }
  return lu.inverse();
}

namespace {

Matrix minor_of(const Matrix& m, std::size_t skip_row, std::size_t skip_col) {
  const std::size_t n = m.rows();
  Matrix out(n - 1, n - 1);
  for (std::size_t r = 0, rr = 0; r < n; ++r) {
    if (r == skip_row) continue;
    for (std::size_t c = 0, cc = 0; c < n; ++c) {
      if (c == skip_col) continue;
      out(rr, cc++) = m(r, c);
    }
    ++rr;
  }
  return out;
}

}  // namespace

double cofactor_determinant(const Matrix& m) {
  if (!m.is_square()) throw ChainError(ErrorCode::NonSquareMatrix, "determinant of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1.0;
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  double det = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    if (m(0, c) == 0.0) continue;
    const double sign = (c % 2 == 0) ? 1.0 : -1.0;
    det += sign * m(0, c) * cofactor_determinant(minor_of(m, 0, c));
  }
  return det;
}

Matrix fundamental_matrix_adjugate(const Matrix& q) {
  if (!q.is_square()) throw ChainError(ErrorCode::NonSquareMatrix, "Q must be square");
  const std::size_t n = q.rows();
  if (n > kAdjugateMaxDim) {
    throw ChainError(ErrorCode::DimensionTooLarge,
                     "cofactor inverse limited to dimension " + std::to_string(kAdjugateMaxDim) +
                         ", got " + std::to_string(n));
  }
  const Matrix system = Matrix::identity(n) - q;
  const double det = cofactor_determinant(system);
  if (std::abs(det) < kPivotEps) {
    auto err = ChainError(ErrorCode::SingularMatrix, "det(I - Q) = " + std::to_string(det));
    err.value = det;
    throw err;
  }
  Matrix inv(n, n);
  if (n == 1) {
    inv(0, 0) = 1.0 / det;
    return inv;
  }
  // adj(M)(i, j) = cofactor C(j, i)
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const double sign = ((r + c) % 2 == 0) ? 1.0 : -1.0;
      inv(c, r) = sign * cofactor_determinant(minor_of(system, r, c)) / det;
    }
  }
  return inv;
}

Matrix absorption_matrix(const Matrix& n, const Matrix& r) {
  if (n.cols() != r.rows() || !n.is_square()) {
    throw ChainError(ErrorCode::DimensionMismatch,
                     "N is " + std::to_string(n.rows()) + "x" + std::to_string(n.cols()) +
                         " but R has " + std::to_string(r.rows()) + " rows");
  }
  return n * r;
}

std::vector<double> expected_steps(const Matrix& n) { return n.row_sums(); }

AbsorbingDecomposition analyze_absorbing(const ChainModel& model) {
  AbsorbingDecomposition d;
  d.form = canonical_form(model);
  d.N = fundamental_matrix(d.form.Q);
  d.B = absorption_matrix(d.N, d.form.R);
  d.t = expected_steps(d.N);

  const std::size_t m = d.N.rows();
  const auto fail = [](const std::string& what) {
    throw ChainError(ErrorCode::NumericalFailure, what);
  };
  const double inv_err = max_abs_diff(d.N * (Matrix::identity(m) - d.form.Q), Matrix::identity(m));
  if (!(inv_err <= kFundTol)) fail("N·(I - Q) deviates from I by " + std::to_string(inv_err));
  for (std::size_t i = 0; i < m; ++i) {
    const auto row = d.B.row(i);
    const double s = std::accumulate(row.begin(), row.end(), 0.0);
    if (!(std::abs(s - 1.0) <= kFundTol)) fail("row " + std::to_string(i) + " of B sums to " + std::to_string(s));
    for (std::size_t j = 0; j < m; ++j)
      if (d.N(i, j) < -kFundTol) fail("negative entry in N");
    for (double b : row)
      if (b < -kFundTol) fail("negative entry in B");
    if (d.t[i] < -kFundTol) fail("negative expected steps");
  }
  return d;
}

double weighted_absorption_time(const AbsorbingDecomposition& decomp, const StateWeights& weights,
                                const StateWeights& terminal_weights, std::size_t start,
                                std::optional<double> shared_terminal) {
  const auto& form = decomp.form;
  const auto row = form.transient_position(start);
  if (!row) {
    throw ChainError(ErrorCode::StartNotTransient,
                     "state index " + std::to_string(start) + " is not transient");
  }
  auto missing = [](std::size_t state, const char* kind) {
    auto err = ChainError(ErrorCode::MissingWeight,
                          std::string("no ") + kind + " for state index " + std::to_string(state));
    err.row = state;
    return err;
  };

  double total = 0.0;
  const auto tr = form.transient();
  for (std::size_t j = 0; j < tr.size(); ++j) {
    const auto it = weights.find(tr[j]);
    if (it == weights.end()) throw missing(tr[j], "weight");
    total += decomp.N(*row, j) * it->second;
  }
  const auto ab = form.absorbing();
  for (std::size_t a = 0; a < ab.size(); ++a) {
    const double prob = decomp.B(*row, a);
    const auto it = terminal_weights.find(ab[a]);
    double w;
    if (it != terminal_weights.end()) {
      w = it->second;
    } else if (shared_terminal) {
      w = *shared_terminal;
    } else if (prob > kFundTol) {
      throw missing(ab[a], "terminal weight");
    } else {
      continue;
    }
    total += prob * w;
  }
  return total;
}

}  // namespace chainlab
