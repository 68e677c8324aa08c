#pragma once

#include <cstddef>

#include "chainlab/classify.hpp"
#include "chainlab/stochastic.hpp"

namespace chainlab {

inline constexpr double kStationaryTol = 1e-9;
inline constexpr std::size_t kPowerMaxIters = 100000;
inline constexpr double kPowerTol = 1e-12;

enum class StationaryMethod { DirectSolve, PowerIteration };

const char* to_string(StationaryMethod method) noexcept;

struct StationaryDistribution {
  ProbabilityVector pi;
  double residual;  // max-norm of pi·A - pi
  StationaryMethod method;
  std::size_t iterations = 0;  // power iteration only
};

/// max_j |(pi·A)_j - pi_j|
double stationary_residual(const ProbabilityVector& pi, const StochasticMatrix& a);

/// Solves (Aᵀ - I)π = 0 with the last balance equation replaced by Σπ = 1.
/// Requires an irreducible chain (periodic chains are accepted).
StationaryDistribution stationary_direct(const ChainModel& model);

/// Iterates p <- p·A from the uniform vector until the max-norm change drops
/// below `tol`. Requires a regular (irreducible, aperiodic) chain.
StationaryDistribution stationary_power(const ChainModel& model,
                                        std::size_t max_iters = kPowerMaxIters,
                                        double tol = kPowerTol);

}  // namespace chainlab
