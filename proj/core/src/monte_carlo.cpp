#include "chainlab/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

#include "chainlab/absorbing.hpp"
#include "chainlab/classify.hpp"
#include "chainlab/error.hpp"

namespace chainlab {

const char* to_string(Quantity q) noexcept {
  switch (q) {
    case Quantity::StepDistribution: return "step_distribution";
    case Quantity::Occupancy: return "occupancy";
    case Quantity::AbsorptionProbability: return "absorption_probability";
    case Quantity::VisitCounts: return "visit_counts";
    case Quantity::StepsToAbsorption: return "steps_to_absorption";
    case Quantity::WeightedTime: return "weighted_time";
  }
  return "unknown";
}

bool SimulationEstimate::agrees_with(std::span<const double> expected, double sigmas,
                                     double abs_floor) const {
  if (expected.size() != value.size()) return false;
  for (std::size_t i = 0; i < value.size(); ++i) {
    if (!(std::abs(value[i] - expected[i]) <= sigmas * std_error[i] + abs_floor)) return false;
  }
  return true;
}

std::vector<double> TransitionSampler::cumulative(std::span<const double> probs) {
  std::vector<double> cum(probs.size());
  double total = 0.0;
  for (std::size_t j = 0; j < probs.size(); ++j) {
    total += probs[j];
    cum[j] = total;
  }
  // Pin the last reachable boundary to exactly 1 so every u in (0,1) maps to a
  // positive-probability state despite rounding in the row sum.
  std::size_t last = probs.size();
  while (last > 0 && probs[last - 1] == 0.0) --last;
  for (std::size_t j = 0; j < probs.size(); ++j) {
    cum[j] = j + 1 >= last ? 1.0 : std::min(cum[j] / total, 1.0);
  }
  return cum;
}

std::size_t TransitionSampler::draw(std::span<const double> cumulative, double u) {
  const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), u);
  return static_cast<std::size_t>(it - cumulative.begin());
}

TransitionSampler::TransitionSampler(const StochasticMatrix& a) : n_(a.size()) {
  cum_.reserve(n_ * n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const auto row = cumulative(a.row(i));
    cum_.insert(cum_.end(), row.begin(), row.end());
  }
}

std::size_t TransitionSampler::next(std::size_t from, double u) const {
  return draw({cum_.data() + from * n_, n_}, u);
}

void DistributionTally::merge(const DistributionTally& other) {
  if (counts.empty()) counts.assign(other.counts.size(), 0);
  trials += other.trials;
  for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += other.counts[i];
}

void OccupancyTally::merge(const OccupancyTally& other) {
  if (sum.empty()) {
    sum.assign(other.sum.size(), 0);
    sum_sq.assign(other.sum_sq.size(), 0);
    window = other.window;
  }
  trials += other.trials;
  for (std::size_t i = 0; i < sum.size(); ++i) {
    sum[i] += other.sum[i];
    sum_sq[i] += other.sum_sq[i];
  }
}

void AbsorptionTally::merge(const AbsorptionTally& other) {
  if (absorbed.empty() && visit_sum.empty()) {
    absorbed.assign(other.absorbed.size(), 0);
    visit_sum.assign(other.visit_sum.size(), 0);
    visit_sq.assign(other.visit_sq.size(), 0);
  }
  trials += other.trials;
  truncated += other.truncated;
  for (std::size_t i = 0; i < absorbed.size(); ++i) absorbed[i] += other.absorbed[i];
  for (std::size_t i = 0; i < visit_sum.size(); ++i) {
    visit_sum[i] += other.visit_sum[i];
    visit_sq[i] += other.visit_sq[i];
  }
  steps_sum += other.steps_sum;
  steps_sq += other.steps_sq;
  weighted.insert(weighted.end(), other.weighted.begin(), other.weighted.end());
}

namespace {

void check_config(const SimulationConfig& config) {
  if (config.trials < 1) throw ChainError(ErrorCode::InvalidConfig, "trials must be >= 1");
  if (config.max_steps < 1) throw ChainError(ErrorCode::InvalidConfig, "max_steps must be >= 1");
  if (!(config.burn_in_fraction >= 0.0 && config.burn_in_fraction < 1.0)) {
    throw ChainError(ErrorCode::InvalidConfig, "burn-in fraction must lie in [0, 1)");
  }
}

// Splits [first, first + trials) into contiguous blocks, one per worker, and
// merges the per-block tallies in block order.
template <typename Tally, typename RunBlock>
Tally run_blocks(const SimulationConfig& config, Tally seed_tally, RunBlock run_block) {
  unsigned workers = config.threads == 0 ? std::thread::hardware_concurrency() : config.threads;
  workers = static_cast<unsigned>(
      std::clamp<std::uint64_t>(workers == 0 ? 1 : workers, 1, config.trials));
  std::vector<Tally> parts(workers, seed_tally);
  const std::uint64_t per = config.trials / workers;
  const std::uint64_t extra = config.trials % workers;
  std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;
  std::uint64_t begin = config.first_trial;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t len = per + (w < extra ? 1 : 0);
    ranges.emplace_back(begin, begin + len);
    begin += len;
  }
  if (workers == 1) {
    run_block(ranges[0].first, ranges[0].second, parts[0]);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] { run_block(ranges[w].first, ranges[w].second, parts[w]); });
    }
  }
  Tally total = seed_tally;
  for (const auto& p : parts) total.merge(p);
  return total;
}

struct StartSampler {
  std::optional<std::size_t> fixed;
  std::vector<double> cumulative;

  std::size_t draw(TrialStream& rng) const {
    if (fixed) return *fixed;
    return TransitionSampler::draw(cumulative, rng.uniform());
  }
};

StartSampler make_start(const SimulationStart& start, std::size_t n) {
  StartSampler s;
  if (const auto* idx = std::get_if<std::size_t>(&start)) {
    if (*idx >= n) {
      throw ChainError(ErrorCode::InvalidConfig, "start state index " + std::to_string(*idx) +
                                                     " out of range");
    }
    s.fixed = *idx;
  } else {
    const auto& p = std::get<ProbabilityVector>(start);
    if (p.size() != n) throw ChainError(ErrorCode::DimensionMismatch, "start vector length differs from state count");
    s.cumulative = TransitionSampler::cumulative(p.span());
  }
  return s;
}

double std_err_of_counts(long double sum, long double sum_sq, std::uint64_t m, long double scale) {
  if (m < 2) return 0.0;
  const long double mean = sum / m;
  long double var = (sum_sq - sum * mean) / (m - 1);
  if (var < 0) var = 0;
  return static_cast<double>(std::sqrt(var / m) / scale);
}

SimulationEstimate make_estimate(Quantity q, std::vector<std::string> labels, std::uint64_t trials,
                                 std::uint64_t truncated) {
  SimulationEstimate e{q, std::move(labels), {}, {}, trials, truncated};
  return e;
}

}  // namespace

DistributionTally tally_step_distribution(const ChainModel& model, std::size_t k,
                                          const SimulationConfig& config) {
  check_config(config);
  std::optional<SimulationStart> start = config.start;
  if (!start) {
    if (!model.initial()) {
      throw ChainError(ErrorCode::MissingInitialVector,
                       "step simulation needs a start state or an initial vector");
    }
    start = *model.initial();
  }
  const std::size_t n = model.size();
  const TransitionSampler sampler(model.matrix());
  const StartSampler starts = make_start(*start, n);

  DistributionTally empty{0, std::vector<std::uint64_t>(n, 0)};
  return run_blocks(config, empty, [&](std::uint64_t lo, std::uint64_t hi, DistributionTally& out) {
    for (std::uint64_t trial = lo; trial < hi; ++trial) {
      TrialStream rng(config.seed, trial);
      std::size_t s = starts.draw(rng);
      for (std::size_t i = 0; i < k; ++i) s = sampler.next(s, rng.uniform());
      ++out.counts[s];
      ++out.trials;
    }
  });
}

SimulationEstimate finalize(const DistributionTally& tally, std::vector<std::string> labels) {
  auto e = make_estimate(Quantity::StepDistribution, std::move(labels), tally.trials, 0);
  const double m = static_cast<double>(tally.trials);
  for (auto c : tally.counts) {
    const double p = static_cast<double>(c) / m;
    e.value.push_back(p);
    e.std_error.push_back(std::sqrt(p * (1.0 - p) / m));
  }
  return e;
}

SimulationEstimate simulate_step_distribution(const ChainModel& model, std::size_t k,
                                              const SimulationConfig& config) {
  return finalize(tally_step_distribution(model, k, config), model.states().labels());
}

OccupancyTally tally_occupancy(const ChainModel& model, const SimulationConfig& config) {
  check_config(config);
  const auto report = classify(model);
  if (!report.is_regular) {
    throw ChainError(ErrorCode::NotRegular, "occupancy simulation requires a regular chain");
  }
  const std::size_t n = model.size();
  SimulationStart start = config.start ? *config.start
                          : model.initial() ? SimulationStart{*model.initial()}
                                            : SimulationStart{ProbabilityVector::uniform(n)};
  const TransitionSampler sampler(model.matrix());
  const StartSampler starts = make_start(start, n);
  const auto burn = static_cast<std::uint64_t>(
      std::floor(config.burn_in_fraction * static_cast<double>(config.max_steps)));
  const std::uint64_t window = config.max_steps - burn;

  OccupancyTally empty{0, window, std::vector<std::uint64_t>(n, 0), std::vector<std::uint64_t>(n, 0)};
  return run_blocks(config, empty, [&](std::uint64_t lo, std::uint64_t hi, OccupancyTally& out) {
    std::vector<std::uint64_t> counts(n);
    for (std::uint64_t trial = lo; trial < hi; ++trial) {
      TrialStream rng(config.seed, trial);
      std::fill(counts.begin(), counts.end(), 0);
      std::size_t s = starts.draw(rng);
      // Count the states occupied after transitions burn+1 .. max_steps.
      for (std::uint64_t t = 1; t <= config.max_steps; ++t) {
        s = sampler.next(s, rng.uniform());
        if (t > burn) ++counts[s];
      }
      for (std::size_t j = 0; j < n; ++j) {
        out.sum[j] += counts[j];
        out.sum_sq[j] += counts[j] * counts[j];
      }
      ++out.trials;
    }
  });
}

SimulationEstimate finalize(const OccupancyTally& tally, std::vector<std::string> labels) {
  auto e = make_estimate(Quantity::Occupancy, std::move(labels), tally.trials, 0);
  const long double denom = static_cast<long double>(tally.trials) * tally.window;
  for (std::size_t j = 0; j < tally.sum.size(); ++j) {
    e.value.push_back(static_cast<double>(static_cast<long double>(tally.sum[j]) / denom));
    e.std_error.push_back(std_err_of_counts(tally.sum[j], tally.sum_sq[j], tally.trials,
                                            static_cast<long double>(tally.window)));
  }
  return e;
}

SimulationEstimate simulate_occupancy(const ChainModel& model, const SimulationConfig& config) {
  return finalize(tally_occupancy(model, config), model.states().labels());
}

namespace {

struct AbsorptionSetup {
  AbsorbingDecomposition decomp;
  std::size_t start;
  std::size_t start_pos;
  bool weighted = false;
  std::vector<double> transient_weight;  // canonical transient order
  std::vector<double> terminal_weight;   // canonical absorbing order
};

AbsorptionSetup prepare_absorption(const ChainModel& model, const SimulationConfig& config) {
  check_config(config);
  AbsorptionSetup setup{analyze_absorbing(model), 0, 0, false, {}, {}};
  const auto* fixed = config.start ? std::get_if<std::size_t>(&*config.start) : nullptr;
  if (!fixed) {
    throw ChainError(ErrorCode::StartNotTransient,
                     "absorption simulation needs a fixed transient start state");
  }
  const auto pos = setup.decomp.form.transient_position(*fixed);
  if (!pos) {
    throw ChainError(ErrorCode::StartNotTransient,
                     "start state '" + model.states().label(*fixed) + "' is absorbing");
  }
  setup.start = *fixed;
  setup.start_pos = *pos;

  if (model.weights()) {
    const auto& w = *model.weights();
    const StateWeights none;
    const auto& tw = model.terminal_weights() ? *model.terminal_weights() : none;
    const std::optional<double> shared =
        model.terminal_weights() ? std::nullopt : std::optional<double>(0.0);
    // Surfaces MissingWeight before any trajectory is run.
    (void)weighted_absorption_time(setup.decomp, w, tw, setup.start, shared);
    setup.weighted = true;
    for (auto s : setup.decomp.form.transient()) setup.transient_weight.push_back(w.at(s));
    for (auto s : setup.decomp.form.absorbing()) {
      const auto it = tw.find(s);
      setup.terminal_weight.push_back(it != tw.end() ? it->second : shared.value_or(0.0));
    }
  }
  return setup;
}

AbsorptionTally run_absorption(const AbsorptionSetup& setup, const ChainModel& model,
                               const SimulationConfig& config) {
  const auto& form = setup.decomp.form;
  const std::size_t n = model.size();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> transient_pos(n, kNone);
  std::vector<std::size_t> absorbing_pos(n, kNone);
  for (std::size_t i = 0; i < form.transient().size(); ++i) transient_pos[form.transient()[i]] = i;
  for (std::size_t i = 0; i < form.k; ++i) absorbing_pos[form.absorbing()[i]] = i;
  const TransitionSampler sampler(model.matrix());
  const std::size_t m = form.transient().size();

  AbsorptionTally empty;
  empty.absorbed.assign(form.k, 0);
  empty.visit_sum.assign(m, 0);
  empty.visit_sq.assign(m, 0);

  return run_blocks(config, empty, [&](std::uint64_t lo, std::uint64_t hi, AbsorptionTally& out) {
    std::vector<std::uint64_t> visits(m);
    for (std::uint64_t trial = lo; trial < hi; ++trial) {
      TrialStream rng(config.seed, trial);
      std::fill(visits.begin(), visits.end(), 0);
      std::size_t s = setup.start;
      visits[transient_pos[s]] = 1;
      std::size_t landed = kNone;
      std::uint64_t steps = 0;
      while (steps < config.max_steps) {
        s = sampler.next(s, rng.uniform());
        ++steps;
        if (absorbing_pos[s] != kNone) {
          landed = absorbing_pos[s];
          break;
        }
        ++visits[transient_pos[s]];
      }
      ++out.trials;
      if (landed == kNone) {
        ++out.truncated;
        continue;
      }
      ++out.absorbed[landed];
      double weighted = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        out.visit_sum[j] += visits[j];
        out.visit_sq[j] += visits[j] * visits[j];
        if (setup.weighted) weighted += static_cast<double>(visits[j]) * setup.transient_weight[j];
      }
      out.steps_sum += steps;
      out.steps_sq += steps * steps;
      if (setup.weighted) out.weighted.push_back(weighted + setup.terminal_weight[landed]);
    }
  });
}

}  // namespace

AbsorptionTally tally_absorption(const ChainModel& model, const SimulationConfig& config) {
  return run_absorption(prepare_absorption(model, config), model, config);
}

AbsorptionEstimate simulate_absorption(const ChainModel& model, const SimulationConfig& config) {
  const AbsorptionSetup setup = prepare_absorption(model, config);
  const AbsorptionTally tally = run_absorption(setup, model, config);
  const auto& form = setup.decomp.form;
  const auto& labels = model.states().labels();
  const std::uint64_t completed = tally.trials - tally.truncated;
  const double mc = static_cast<double>(completed);

  std::vector<std::string> abs_labels, tr_labels;
  for (auto s : form.absorbing()) abs_labels.push_back(labels[s]);
  for (auto s : form.transient()) tr_labels.push_back(labels[s]);

  AbsorptionEstimate est{
      setup.start,
      make_estimate(Quantity::AbsorptionProbability, abs_labels, tally.trials, tally.truncated),
      make_estimate(Quantity::VisitCounts, tr_labels, tally.trials, tally.truncated),
      make_estimate(Quantity::StepsToAbsorption, {}, tally.trials, tally.truncated),
      std::nullopt};

  for (auto c : tally.absorbed) {
    const double p = static_cast<double>(c) / mc;
    est.absorption.value.push_back(p);
    est.absorption.std_error.push_back(std::sqrt(p * (1.0 - p) / mc));
  }
  for (std::size_t j = 0; j < tally.visit_sum.size(); ++j) {
    est.visits.value.push_back(static_cast<double>(static_cast<long double>(tally.visit_sum[j]) / completed));
    est.visits.std_error.push_back(std_err_of_counts(tally.visit_sum[j], tally.visit_sq[j], completed, 1.0L));
  }
  est.steps.value.push_back(static_cast<double>(static_cast<long double>(tally.steps_sum) / completed));
  est.steps.std_error.push_back(std_err_of_counts(tally.steps_sum, tally.steps_sq, completed, 1.0L));

  if (setup.weighted) {
    auto w = make_estimate(Quantity::WeightedTime, {}, tally.trials, tally.truncated);
    long double sum = 0, sum_sq = 0;
    for (double x : tally.weighted) {
      sum += x;
      sum_sq += static_cast<long double>(x) * x;
    }
    w.value.push_back(static_cast<double>(sum / completed));
    w.std_error.push_back(std_err_of_counts(sum, sum_sq, completed, 1.0L));
    est.weighted_time = std::move(w);
  }
  return est;
}

}  // namespace chainlab
