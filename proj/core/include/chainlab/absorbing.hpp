#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "chainlab/linalg.hpp"
#include "chainlab/stochastic.hpp"

namespace chainlab {

inline constexpr double kFundTol = 1e-8;
inline constexpr std::size_t kAdjugateMaxDim = 6;

/// Partition of an absorbing chain's matrix after listing absorbing states first.
struct CanonicalForm {
  std::vector<std::size_t> canonical_order;  // absorbing states, then transient, each ascending
  std::size_t k = 0;                         // number of absorbing states
  Matrix R;                                  // (n-k)×k, transient -> absorbing
  Matrix Q;                                  // (n-k)×(n-k), transient -> transient

  std::span<const std::size_t> absorbing() const { return {canonical_order.data(), k}; }
  std::span<const std::size_t> transient() const {
    return {canonical_order.data() + k, canonical_order.size() - k};
  }
  /// Row of original state `state` in Q/R/N/B, or nullopt for absorbing states.
  std::optional<std::size_t> transient_position(std::size_t state) const;
  std::optional<std::size_t> absorbing_position(std::size_t state) const;
};

struct AbsorbingDecomposition {
  CanonicalForm form;
  Matrix N;               // expected visits: row = start, column = visited transient state
  Matrix B;               // absorption probabilities: row = start, column = absorbing state
  std::vector<double> t;  // expected transient steps before absorption
};

/// Throws NotAbsorbing unless classify(model) reports an absorbing chain.
CanonicalForm canonical_form(const ChainModel& model);

/// N = (I - Q)^-1 by LU with partial pivoting.
Matrix fundamental_matrix(const Matrix& q);

/// N = adj(I - Q) / det(I - Q) via cofactor expansion. Test oracle only;
/// throws DimensionTooLarge above kAdjugateMaxDim.
Matrix fundamental_matrix_adjugate(const Matrix& q);

/// Determinant by Laplace expansion along the first row.
double cofactor_determinant(const Matrix& m);

/// B = N·R
Matrix absorption_matrix(const Matrix& n, const Matrix& r);

/// t_i = Σ_j N_ij
std::vector<double> expected_steps(const Matrix& n);

/// Full decomposition; invariants (N·(I-Q) = I, unit B row sums, nonnegativity)
/// are checked at kFundTol and reported as NumericalFailure.
AbsorbingDecomposition analyze_absorbing(const ChainModel& model);

/// Σ_j N[start, j]·weight_j + Σ_a B[start, a]·terminal_a.
///
/// Every transient state needs a weight. A terminal weight is needed for each
/// absorbing state with positive absorption probability from `start`; when
/// `shared_terminal` is set it is used for absorbing states missing from
/// `terminal_weights`.
double weighted_absorption_time(const AbsorbingDecomposition& decomp, const StateWeights& weights,
                                const StateWeights& terminal_weights, std::size_t start,
                                std::optional<double> shared_terminal = std::nullopt);

}  // namespace chainlab
