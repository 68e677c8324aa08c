#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "chainlab/linalg.hpp"

namespace chainlab {

// Tolerance on row sums (and probability-vector sums) accepted as-is.
inline constexpr double kRowSumTol = 1e-9;
// Window within which opt-in renormalization rescales a row.
inline constexpr double kRenormTol = 1e-6;

/// Ordered, duplicate-free state labels.
class StateSpace {
 public:
  StateSpace() = default;
  /// Throws InvalidStateLabel on an empty label, DuplicateStateLabel on a repeat.
  explicit StateSpace(std::vector<std::string> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  const std::string& label(std::size_t index) const { return labels_.at(index); }
  std::optional<std::size_t> find(std::string_view label) const;
  /// Like find(), but throws UnknownStateReference.
  std::size_t index_of(std::string_view label) const;

  friend bool operator==(const StateSpace& a, const StateSpace& b) {
    return a.labels_ == b.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Square matrix with entries in [0,1] and unit row sums (row = from-state).
class StochasticMatrix {
 public:
  /// Validates `m`; throws NonSquareMatrix, NonFiniteEntry, NegativeEntry or
  /// RowSumViolation (with `row` and `value` set).
  explicit StochasticMatrix(Matrix m, double row_sum_tol = kRowSumTol);

  std::size_t size() const noexcept { return m_.rows(); }
  double operator()(std::size_t from, std::size_t to) const { return m_(from, to); }
  const Matrix& matrix() const noexcept { return m_; }
  std::span<const double> row(std::size_t from) const { return m_.row(from); }

  /// Reorders states: entry (i, j) of the result is entry (order[i], order[j]).
  StochasticMatrix permuted(std::span<const std::size_t> order) const;

  friend bool operator==(const StochasticMatrix&, const StochasticMatrix&) = default;

 private:
  Matrix m_;
};

/// Distribution over states; entries nonnegative and summing to 1.
class ProbabilityVector {
 public:
  /// Throws NonFiniteEntry, InvalidProbabilityVector (entry < -tol or bad sum).
  /// Entries in [-tol, 0) are clamped to zero.
  explicit ProbabilityVector(std::vector<double> probs, double sum_tol = kRowSumTol);

  static ProbabilityVector point_mass(std::size_t n, std::size_t state);
  static ProbabilityVector uniform(std::size_t n);

  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t i) const { return probs_[i]; }
  const std::vector<double>& values() const noexcept { return probs_; }
  std::span<const double> span() const noexcept { return probs_; }

  friend bool operator==(const ProbabilityVector&, const ProbabilityVector&) = default;

 private:
  std::vector<double> probs_;
};

/// Per-state nonnegative weights keyed by state index.
using StateWeights = std::map<std::size_t, double>;

/// Chain description as read from input, before any checking.
struct RawChain {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> transitions;
  std::optional<std::vector<double>> initial;
  std::optional<std::map<std::string, double>> weights;
  std::optional<std::map<std::string, double>> terminal_weights;
};

struct ValidationOptions {
  bool renormalize = false;
  double row_sum_tol = kRowSumTol;
  double renorm_tol = kRenormTol;
};

/// A validated, immutable chain.
class ChainModel {
 public:
  ChainModel(StateSpace states, StochasticMatrix matrix,
             std::optional<ProbabilityVector> initial = std::nullopt,
             std::optional<StateWeights> weights = std::nullopt,
             std::optional<StateWeights> terminal_weights = std::nullopt,
             std::vector<std::size_t> renormalized_rows = {});

  std::size_t size() const noexcept { return states_.size(); }
  const StateSpace& states() const noexcept { return states_; }
  const StochasticMatrix& matrix() const noexcept { return matrix_; }
  const std::optional<ProbabilityVector>& initial() const noexcept { return initial_; }
  const std::optional<StateWeights>& weights() const noexcept { return weights_; }
  const std::optional<StateWeights>& terminal_weights() const noexcept {
    return terminal_weights_;
  }
  /// Rows rescaled to unit sum by opt-in renormalization.
  const std::vector<std::size_t>& renormalized_rows() const noexcept {
    return renormalized_rows_;
  }

  /// Same chain with states listed in `order` (new index i is old index order[i]).
  ChainModel permuted(std::span<const std::size_t> order) const;

 private:
  StateSpace states_;
  StochasticMatrix matrix_;
  std::optional<ProbabilityVector> initial_;
  std::optional<StateWeights> weights_;
  std::optional<StateWeights> terminal_weights_;
  std::vector<std::size_t> renormalized_rows_;
};

ChainModel validate_model(const RawChain& raw, const ValidationOptions& options = {});

/// One transition of the distribution: returns p·A.
ProbabilityVector step(const ProbabilityVector& p, const StochasticMatrix& a);

/// P_k = P_0·A^k by k successive steps.
ProbabilityVector evolve(const ProbabilityVector& initial, const StochasticMatrix& a,
                         std::size_t k);
/// Throws MissingInitialVector if the model carries no initial vector.
ProbabilityVector evolve(const ChainModel& model, std::size_t k);

/// P_k for each requested k, computed in one forward sweep.
std::vector<std::pair<std::size_t, ProbabilityVector>> evolve_at(
    const ChainModel& model, std::vector<std::size_t> ks);

}  // namespace chainlab
