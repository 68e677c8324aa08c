#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "chainlab/stochastic.hpp"

namespace chainlab {

inline constexpr std::uint64_t kDefaultMaxSteps = 10000;
inline constexpr double kBurnInFraction = 0.1;
inline constexpr double kAcceptanceSigmas = 4.0;

/// SplitMix64 output function.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Independent random stream for one trajectory, keyed by (seed, trial index).
/// Streams do not depend on how trials are scheduled across threads or runs.
class TrialStream {
 public:
  using result_type = std::uint64_t;

  TrialStream(std::uint64_t seed, std::uint64_t trial) noexcept
      : state_(mix64(seed ^ mix64(trial + 0x632BE59BD9B4E019ULL))) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return ~result_type{0}; }

  result_type operator()() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  /// Uniform in the open interval (0, 1).
  double uniform() noexcept { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Inverse-CDF sampler over the rows of a stochastic matrix. A draw u picks
/// the smallest index whose cumulative probability is >= u, so ties at a
/// boundary go to the lower index and zero-probability states are never drawn.
class TransitionSampler {
 public:
  explicit TransitionSampler(const StochasticMatrix& a);

  std::size_t size() const noexcept { return n_; }
  std::size_t next(std::size_t from, double u) const;

  static std::vector<double> cumulative(std::span<const double> probs);
  static std::size_t draw(std::span<const double> cumulative, double u);

 private:
  std::size_t n_;
  std::vector<double> cum_;
};

using SimulationStart = std::variant<std::size_t, ProbabilityVector>;

struct SimulationConfig {
  std::uint64_t seed = 0;
  std::uint64_t trials = 100000;
  std::uint64_t max_steps = kDefaultMaxSteps;
  std::optional<SimulationStart> start;
  /// Index of the first trial's stream; lets a run be split into pieces.
  std::uint64_t first_trial = 0;
  /// Worker threads; 0 uses the hardware concurrency. Results do not depend on it.
  unsigned threads = 0;
  double burn_in_fraction = kBurnInFraction;
};

enum class Quantity {
  StepDistribution,
  Occupancy,
  AbsorptionProbability,
  VisitCounts,
  StepsToAbsorption,
  WeightedTime,
};

const char* to_string(Quantity q) noexcept;

struct SimulationEstimate {
  Quantity quantity;
  std::vector<std::string> labels;  // one per component; empty for scalars
  std::vector<double> value;
  std::vector<double> std_error;
  std::uint64_t trials = 0;
  std::uint64_t truncated_trajectories = 0;

  /// |value - expected| <= sigmas·std_error + abs_floor for every component.
  bool agrees_with(std::span<const double> expected, double sigmas = kAcceptanceSigmas,
                   double abs_floor = 1e-12) const;
};

// Raw integer tallies. Merging tallies of consecutive trial ranges is exact and
// reproduces the tally of the combined range.

struct DistributionTally {
  std::uint64_t trials = 0;
  std::vector<std::uint64_t> counts;

  void merge(const DistributionTally& other);
  friend bool operator==(const DistributionTally&, const DistributionTally&) = default;
};

struct OccupancyTally {
  std::uint64_t trials = 0;
  std::uint64_t window = 0;  // counted steps per trajectory
  std::vector<std::uint64_t> sum;
  std::vector<std::uint64_t> sum_sq;

  void merge(const OccupancyTally& other);
  friend bool operator==(const OccupancyTally&, const OccupancyTally&) = default;
};

struct AbsorptionTally {
  std::uint64_t trials = 0;
  std::uint64_t truncated = 0;
  std::vector<std::uint64_t> absorbed;   // per absorbing state, canonical order
  std::vector<std::uint64_t> visit_sum;  // per transient state, canonical order
  std::vector<std::uint64_t> visit_sq;
  std::uint64_t steps_sum = 0;
  std::uint64_t steps_sq = 0;
  std::vector<double> weighted;  // per completed trajectory, in trial order

  void merge(const AbsorptionTally& other);
  friend bool operator==(const AbsorptionTally&, const AbsorptionTally&) = default;
};

DistributionTally tally_step_distribution(const ChainModel& model, std::size_t k,
                                          const SimulationConfig& config);
OccupancyTally tally_occupancy(const ChainModel& model, const SimulationConfig& config);
AbsorptionTally tally_absorption(const ChainModel& model, const SimulationConfig& config);

SimulationEstimate finalize(const DistributionTally& tally, std::vector<std::string> labels);
SimulationEstimate finalize(const OccupancyTally& tally, std::vector<std::string> labels);

/// Empirical distribution of the state after k steps. Start defaults to the
/// model's initial vector (MissingInitialVector if neither is given).
SimulationEstimate simulate_step_distribution(const ChainModel& model, std::size_t k,
                                              const SimulationConfig& config);

/// Long-run occupancy frequencies after discarding the burn-in prefix of each
/// trajectory of length max_steps. Throws NotRegular. Start defaults to the
/// initial vector, else uniform.
SimulationEstimate simulate_occupancy(const ChainModel& model, const SimulationConfig& config);

struct AbsorptionEstimate {
  std::size_t start;
  SimulationEstimate absorption;  // over absorbing states
  SimulationEstimate visits;      // over transient states
  SimulationEstimate steps;
  std::optional<SimulationEstimate> weighted_time;  // when the model carries weights
};

/// Throws NotAbsorbing, or StartNotTransient unless config.start is a fixed
/// transient state. Truncated trajectories are excluded from all means.
AbsorptionEstimate simulate_absorption(const ChainModel& model, const SimulationConfig& config);

}  // namespace chainlab
