#include "chainlab/ergodic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chainlab/error.hpp"
#include "chainlab/linalg.hpp"

namespace chainlab {

const char* to_string(StationaryMethod method) noexcept {
  switch (method) {
    case StationaryMethod::DirectSolve: return "direct";
    case StationaryMethod::PowerIteration: return "power";
  }
  return "unknown";
}

double stationary_residual(const ProbabilityVector& pi, const StochasticMatrix& a) {
  const auto next = left_multiply(pi.span(), a.matrix());
  return max_abs_diff(next, pi.span());
}

namespace {

void require_ergodic(const ClassificationReport& report) {
  if (report.chain_type != ChainType::Ergodic) {
    throw ChainError(ErrorCode::NotErgodic,
                     std::string("stationary distribution requires an ergodic chain; chain is ") +
                         to_string(report.chain_type));
  }
}

}  // namespace

StationaryDistribution stationary_direct(const ChainModel& model) {
  require_ergodic(classify(model));
  const auto& a = model.matrix();
  const std::size_t n = a.size();

  Matrix system = a.matrix().transposed() - Matrix::identity(n);
  for (std::size_t j = 0; j < n; ++j) system(n - 1, j) = 1.0;
  std::vector<double> rhs(n, 0.0);
  rhs[n - 1] = 1.0;

  std::vector<double> solution;
  try {
    solution = LuDecomposition(system, kPivotEps).solve(rhs);
  } catch (const ChainError& e) {
    if (e.code() != ErrorCode::SingularMatrix) throw;
    throw ChainError(ErrorCode::SingularSystem, "balance equations are singular: " + e.detail());
  }

  ProbabilityVector pi(std::move(solution), kStationaryTol);
  const double residual = stationary_residual(pi, a);
  if (!(residual <= kStationaryTol)) {
    auto err = ChainError(ErrorCode::NumericalFailure,
                          "stationary residual " + std::to_string(residual) + " exceeds tolerance");
    err.value = residual;
    throw err;
  }
  return {std::move(pi), residual, StationaryMethod::DirectSolve, 0};
}

StationaryDistribution stationary_power(const ChainModel& model, std::size_t max_iters,
                                        double tol) {
  const auto report = classify(model);
  if (!report.is_regular) {
    std::string why = report.chain_type == ChainType::Ergodic
                          ? "chain is periodic (period " + std::to_string(report.period.value_or(0)) + ")"
                          : std::string("chain is ") + to_string(report.chain_type);
    throw ChainError(ErrorCode::NotRegular, "power iteration requires a regular chain; " + why);
  }
  if (max_iters == 0 || !(tol > 0.0)) {
    throw ChainError(ErrorCode::InvalidConfig, "power iteration needs max_iters >= 1 and tol > 0");
  }

  const auto& a = model.matrix();
  std::vector<double> p(a.size(), 1.0 / static_cast<double>(a.size()));
  double change = 0.0;
  for (std::size_t iter = 1; iter <= max_iters; ++iter) {
    auto next = left_multiply(p, a.matrix());
    change = max_abs_diff(next, p);
    p = std::move(next);
    if (change < tol) {
      ProbabilityVector pi(std::move(p), kStationaryTol);
      const double residual = stationary_residual(pi, a);
      return {std::move(pi), residual, StationaryMethod::PowerIteration, iter};
    }
  }
  auto err = ChainError(ErrorCode::NoConvergence,
                        "no convergence after " + std::to_string(max_iters) +
                            " iterations (last change " + std::to_string(change) + ")");
  err.value = change;
  throw err;
}

}  // namespace chainlab
