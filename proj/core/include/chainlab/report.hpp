#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chainlab/absorbing.hpp"
#include "chainlab/classify.hpp"
#include "chainlab/ergodic.hpp"
#include "chainlab/monte_carlo.hpp"
#include "chainlab/stochastic.hpp"

namespace chainlab {

enum class SimulationKind { Step, Occupancy, Absorption };

struct SimulationRequest {
  std::optional<SimulationKind> kind;  // nullopt = every kind the chain supports
  SimulationConfig config;
  std::vector<std::size_t> steps;   // Step kind; empty falls back to the evolution steps
  std::vector<std::size_t> starts;  // Absorption kind; empty = every transient state
};

struct AnalysisRequest {
  bool stationary = false;
  StationaryMethod method = StationaryMethod::DirectSolve;
  std::size_t max_iters = kPowerMaxIters;
  double power_tol = kPowerTol;

  bool absorbing = false;
  std::vector<std::size_t> starts;  // weighted-time starts; empty = every transient state

  std::vector<std::size_t> evolution_steps;
  std::optional<SimulationRequest> simulation;

  /// Run only what the chain type supports instead of raising on mismatch.
  bool applicable_only = false;
};

struct AbsorbingSummary {
  AbsorbingDecomposition decomposition;
  std::map<std::size_t, double> weighted_times;  // start state -> weighted time
};

struct EvolutionEntry {
  std::size_t k;
  ProbabilityVector p;
};

struct SimulationRecord {
  SimulationEstimate estimate;
  std::optional<std::size_t> start;  // absorption runs
  std::optional<std::size_t> k;      // step-distribution runs
};

struct SimulationSection {
  std::uint64_t seed = 0;
  std::uint64_t trials = 0;
  std::uint64_t max_steps = 0;
  std::vector<SimulationRecord> records;
};

struct AnalysisReport {
  std::string model_name;
  std::vector<std::string> labels;
  ClassificationReport classification;
  std::optional<StationaryDistribution> stationary;
  std::optional<AbsorbingSummary> absorbing;
  std::optional<std::vector<EvolutionEntry>> evolution;
  std::optional<SimulationSection> simulation;
  std::vector<std::string> warnings;
};

/// Prefix of metadata keys holding published values to compare against:
///   claim.absorption/<start>/<target>, claim.expected_steps/<start>,
///   claim.weighted_time/<start>, claim.stationary/<state>.
inline constexpr const char* kClaimPrefix = "claim.";
inline constexpr double kDefaultClaimTol = 1e-3;

/// Compares metadata claims with the computed sections of `report` and
/// returns one warning per disagreement. `claim.tolerance` overrides the
/// absolute tolerance.
std::vector<std::string> check_claims(const AnalysisReport& report,
                                      const std::map<std::string, std::string>& metadata);

AnalysisReport analyze(const ChainModel& model, const AnalysisRequest& request,
                       std::string model_name = {},
                       const std::map<std::string, std::string>& metadata = {});

enum class ReportFormat { Human, Json };

std::string render_report(const AnalysisReport& report, ReportFormat format);

}  // namespace chainlab
