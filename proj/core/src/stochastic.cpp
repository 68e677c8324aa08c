#include "chainlab/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "chainlab/error.hpp"

namespace chainlab {

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

ChainError row_sum_error(std::size_t row, double sum) {
  ChainError err(ErrorCode::RowSumViolation,
                 "row " + std::to_string(row) + " sums to " + fmt_double(sum) + ", expected 1");
  err.row = row;
  err.value = sum;
  return err;
}

void check_entries(std::span<const double> values, std::size_t row, bool row_is_matrix) {
  for (std::size_t c = 0; c < values.size(); ++c) {
    const double v = values[c];
    const std::string where = row_is_matrix
                                  ? "entry (" + std::to_string(row) + ", " + std::to_string(c) + ")"
                                  : "entry " + std::to_string(c);
    if (!std::isfinite(v)) {
      ChainError err(ErrorCode::NonFiniteEntry, where + " is not a finite number");
      err.row = row;
      err.column = c;
      throw err;
    }
    if (v < 0.0) {
      ChainError err(ErrorCode::NegativeEntry, where + " is negative (" + fmt_double(v) + ")");
      err.row = row;
      err.column = c;
      err.value = v;
      throw err;
    }
  }
}

double kahan_sum(std::span<const double> values) {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  return sum;
}

}  // namespace

StateSpace::StateSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
  index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i].empty()) {
      ChainError err(ErrorCode::InvalidStateLabel, "state " + std::to_string(i) + " has an empty label");
      err.row = i;
      throw err;
    }
    if (!index_.emplace(labels_[i], i).second) {
      ChainError err(ErrorCode::DuplicateStateLabel,
                     "label '" + labels_[i] + "' appears more than once");
      err.row = i;
      throw err;
    }
  }
}

std::optional<std::size_t> StateSpace::find(std::string_view label) const {
  const auto it = index_.find(std::string(label));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t StateSpace::index_of(std::string_view label) const {
  if (auto idx = find(label)) return *idx;
  throw ChainError(ErrorCode::UnknownStateReference,
                   "no state labelled '" + std::string(label) + "'");
}

StochasticMatrix::StochasticMatrix(Matrix m, double row_sum_tol) : m_(std::move(m)) {
  if (!m_.is_square()) {
    throw ChainError(ErrorCode::NonSquareMatrix,
                     "transition matrix is " + std::to_string(m_.rows()) + "x" +
                         std::to_string(m_.cols()));
  }
  if (m_.rows() == 0) {
    throw ChainError(ErrorCode::DimensionMismatch, "a chain needs at least one state");
  }
  for (std::size_t r = 0; r < m_.rows(); ++r) {
    check_entries(m_.row(r), r, true);
    const double sum = kahan_sum(m_.row(r));
    if (std::abs(sum - 1.0) > row_sum_tol) throw row_sum_error(r, sum);
  }
}

StochasticMatrix StochasticMatrix::permuted(std::span<const std::size_t> order) const {
  const std::size_t n = size();
  if (order.size() != n) {
    throw ChainError(ErrorCode::DimensionMismatch, "permutation length differs from state count");
  }
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = m_(order[i], order[j]);
  // Exact reordering of a valid matrix; row sums are unchanged up to summation order.
  return StochasticMatrix(std::move(out), 8 * kRowSumTol);
}

ProbabilityVector::ProbabilityVector(std::vector<double> probs, double sum_tol)
    : probs_(std::move(probs)) {
  if (probs_.empty()) {
    throw ChainError(ErrorCode::InvalidProbabilityVector, "probability vector is empty");
  }
  for (std::size_t i = 0; i < probs_.size(); ++i) {
    double& v = probs_[i];
    if (!std::isfinite(v)) {
      ChainError err(ErrorCode::NonFiniteEntry, "entry " + std::to_string(i) + " is not finite");
      err.row = i;
      throw err;
    }
    if (v < -sum_tol) {
      ChainError err(ErrorCode::InvalidProbabilityVector,
                     "entry " + std::to_string(i) + " is negative (" + fmt_double(v) + ")");
      err.row = i;
      err.value = v;
      throw err;
    }
    if (v < 0.0) v = 0.0;
  }
  const double sum = kahan_sum(probs_);
  if (std::abs(sum - 1.0) > sum_tol) {
    ChainError err(ErrorCode::InvalidProbabilityVector,
                   "entries sum to " + fmt_double(sum) + ", expected 1");
    err.value = sum;
    throw err;
  }
}

ProbabilityVector ProbabilityVector::point_mass(std::size_t n, std::size_t state) {
  std::vector<double> p(n, 0.0);
  p.at(state) = 1.0;
  return ProbabilityVector(std::move(p));
}

ProbabilityVector ProbabilityVector::uniform(std::size_t n) {
  return ProbabilityVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ChainModel::ChainModel(StateSpace states, StochasticMatrix matrix,
                       std::optional<ProbabilityVector> initial,
                       std::optional<StateWeights> weights,
                       std::optional<StateWeights> terminal_weights,
                       std::vector<std::size_t> renormalized_rows)
    : states_(std::move(states)),
      matrix_(std::move(matrix)),
      initial_(std::move(initial)),
      weights_(std::move(weights)),
      terminal_weights_(std::move(terminal_weights)),
      renormalized_rows_(std::move(renormalized_rows)) {
  const std::size_t n = states_.size();
  if (matrix_.size() != n) {
    throw ChainError(ErrorCode::DimensionMismatch,
                     std::to_string(n) + " states but a " + std::to_string(matrix_.size()) +
                         "x" + std::to_string(matrix_.size()) + " transition matrix");
  }
  if (initial_ && initial_->size() != n) {
    throw ChainError(ErrorCode::DimensionMismatch,
                     "initial vector has " + std::to_string(initial_->size()) +
                         " entries for " + std::to_string(n) + " states");
  }
  for (const auto* w : {&weights_, &terminal_weights_}) {
    if (!*w) continue;
    for (const auto& [index, value] : **w) {
      if (index >= n) {
        throw ChainError(ErrorCode::UnknownStateReference,
                         "weight refers to state index " + std::to_string(index));
      }
      if (!std::isfinite(value) || value < 0.0) {
        throw ChainError(ErrorCode::NegativeWeight,
                         "weight of '" + states_.label(index) + "' must be finite and nonnegative");
      }
    }
  }
}

ChainModel ChainModel::permuted(std::span<const std::size_t> order) const {
  const std::size_t n = size();
  std::vector<std::size_t> new_index(n);
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    labels[i] = states_.label(order[i]);
    new_index[order[i]] = i;
  }
  std::optional<ProbabilityVector> init;
  if (initial_) {
    std::vector<double> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = (*initial_)[order[i]];
    init = ProbabilityVector(std::move(p));
  }
  auto remap = [&](const std::optional<StateWeights>& w) -> std::optional<StateWeights> {
    if (!w) return std::nullopt;
    StateWeights out;
    for (const auto& [idx, v] : *w) out[new_index[idx]] = v;
    return out;
  };
  std::vector<std::size_t> renorm;
  for (auto r : renormalized_rows_) renorm.push_back(new_index[r]);
  std::sort(renorm.begin(), renorm.end());
  return ChainModel(StateSpace(std::move(labels)), matrix_.permuted(order), std::move(init),
                    remap(weights_), remap(terminal_weights_), std::move(renorm));
}

namespace {

std::optional<StateWeights> resolve_weights(const std::optional<std::map<std::string, double>>& raw,
                                            const StateSpace& states) {
  if (!raw) return std::nullopt;
  StateWeights out;
  for (const auto& [label, value] : *raw) {
    const std::size_t idx = states.index_of(label);
    if (!std::isfinite(value)) {
      throw ChainError(ErrorCode::NonFiniteEntry, "weight of '" + label + "' is not finite");
    }
    if (value < 0.0) {
      ChainError err(ErrorCode::NegativeWeight,
                     "weight of '" + label + "' is negative (" + fmt_double(value) + ")");
      err.value = value;
      throw err;
    }
    out[idx] = value;
  }
  return out;
}

}  // namespace

namespace {

std::string indexed(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

// Field path in the model document for an error raised on the transition matrix.
std::string transitions_path(const ChainError& e) {
  std::string path = "transitions";
  if (e.row) path = indexed(path, *e.row);
  if (e.column) path = indexed(path, *e.column);
  return path;
}

}  // namespace

ChainModel validate_model(const RawChain& raw, const ValidationOptions& options) {
  std::optional<StateSpace> states_holder;
  try {
    states_holder.emplace(raw.labels);
  } catch (const ChainError& e) {
    throw e.at(e.row ? indexed("states", *e.row) : "states");
  }
  StateSpace states = std::move(*states_holder);
  const std::size_t n = states.size();

  for (std::size_t r = 0; r < raw.transitions.size(); ++r) {
    if (raw.transitions[r].size() != raw.transitions.size()) {
      ChainError err(ErrorCode::NonSquareMatrix,
                     "row " + std::to_string(r) + " has " +
                         std::to_string(raw.transitions[r].size()) + " entries in a matrix with " +
                         std::to_string(raw.transitions.size()) + " rows",
                     indexed("transitions", r));
      err.row = r;
      throw err;
    }
  }
  if (raw.transitions.size() != n) {
    throw ChainError(ErrorCode::DimensionMismatch,
                     std::to_string(n) + " states but " + std::to_string(raw.transitions.size()) +
                         " transition rows",
                     "transitions");
  }

  Matrix m = Matrix::from_rows(raw.transitions);
  std::vector<std::size_t> renormalized;
  std::optional<StochasticMatrix> matrix;
  try {
    for (std::size_t r = 0; r < n; ++r) {
      check_entries(m.row(r), r, true);
      const double sum = kahan_sum(m.row(r));
      const double dev = std::abs(sum - 1.0);
      if (options.renormalize && dev <= options.renorm_tol) {
        if (dev > options.row_sum_tol) renormalized.push_back(r);
        for (double& v : m.row(r)) v /= sum;
      } else if (dev > options.row_sum_tol) {
        throw row_sum_error(r, sum);
      }
    }
    matrix.emplace(std::move(m), options.row_sum_tol);
  } catch (const ChainError& e) {
    throw e.at(transitions_path(e));
  }

  std::optional<ProbabilityVector> initial;
  if (raw.initial) {
    if (raw.initial->size() != n) {
      throw ChainError(ErrorCode::DimensionMismatch,
                       "initial vector has " + std::to_string(raw.initial->size()) +
                           " entries for " + std::to_string(n) + " states",
                       "initial");
    }
    std::vector<double> p = *raw.initial;
    try {
      if (options.renormalize) {
        check_entries(p, 0, false);
        const double sum = kahan_sum(p);
        if (std::abs(sum - 1.0) <= options.renorm_tol && sum > 0.0) {
          for (double& v : p) v /= sum;
        }
      }
      initial = ProbabilityVector(std::move(p), options.row_sum_tol);
    } catch (const ChainError& e) {
      const auto idx = e.column ? e.column : e.row;
      throw e.at(idx ? indexed("initial", *idx) : "initial");
    }
  }

  auto resolve = [&](const std::optional<std::map<std::string, double>>& w, const char* key) {
    try {
      return resolve_weights(w, states);
    } catch (const ChainError& e) {
      // resolve_weights names the label in its message; point at the map entry.
      std::string label;
      for (const auto& [l, v] : *w) {
        if (!states.find(l) || !std::isfinite(v) || v < 0.0) {
          label = l;
          break;
        }
      }
      throw e.at(std::string(key) + "." + label);
    }
  };
  auto weights = resolve(raw.weights, "weights");
  auto terminal = resolve(raw.terminal_weights, "terminal_weights");
  return ChainModel(std::move(states), std::move(*matrix), std::move(initial), std::move(weights),
                    std::move(terminal), std::move(renormalized));
}

ProbabilityVector step(const ProbabilityVector& p, const StochasticMatrix& a) {
  if (p.size() != a.size()) {
    throw ChainError(ErrorCode::DimensionMismatch,
                     "vector of length " + std::to_string(p.size()) + " against " +
                         std::to_string(a.size()) + " states");
  }
  return ProbabilityVector(left_multiply(p.span(), a.matrix()), 8 * kRowSumTol);
}

ProbabilityVector evolve(const ProbabilityVector& initial, const StochasticMatrix& a,
                         std::size_t k) {
  ProbabilityVector p = initial;
  for (std::size_t i = 0; i < k; ++i) p = step(p, a);
  return p;
}

ProbabilityVector evolve(const ChainModel& model, std::size_t k) {
  if (!model.initial()) {
    throw ChainError(ErrorCode::MissingInitialVector, "model has no initial vector");
  }
  return evolve(*model.initial(), model.matrix(), k);
}

std::vector<std::pair<std::size_t, ProbabilityVector>> evolve_at(const ChainModel& model,
                                                                 std::vector<std::size_t> ks) {
  if (!model.initial()) {
    throw ChainError(ErrorCode::MissingInitialVector, "model has no initial vector");
  }
  std::sort(ks.begin(), ks.end());
  ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
  std::vector<std::pair<std::size_t, ProbabilityVector>> out;
  out.reserve(ks.size());
  ProbabilityVector p = *model.initial();
  std::size_t at = 0;
  for (std::size_t k : ks) {
    for (; at < k; ++at) p = step(p, model.matrix());
    out.emplace_back(k, p);
  }
  return out;
}

}  // namespace chainlab
