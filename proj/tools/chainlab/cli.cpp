#include "chainlab/cli.hpp"

#include <iostream>
#include <map>
#include <optional>

#include <CLI11.hpp>

#include "chainlab/error.hpp"
#include "chainlab/model_io.hpp"
#include "chainlab/report.hpp"

namespace chainlab::cli {

namespace {

struct Options {
  std::string format = "human";
  bool renormalize = false;
  double tolerance = kRowSumTol;
  std::string model_path;

  std::vector<std::size_t> steps;
  std::string method = "direct";
  std::size_t max_iters = kPowerMaxIters;
  double power_tol = kPowerTol;
  std::vector<std::string> starts;

  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  std::uint64_t max_steps = kDefaultMaxSteps;
  std::string quantity;
  unsigned threads = 0;
};

std::vector<std::size_t> resolve_starts(const ChainModel& model, const std::vector<std::string>& labels) {
  std::vector<std::size_t> out;
  for (const auto& l : labels) {
    try {
      out.push_back(model.states().index_of(l));
    } catch (const ChainError& e) {
      throw e.at("--start");
    }
  }
  return out;
}

SimulationConfig simulation_config(const Options& o) {
  SimulationConfig cfg;
  cfg.seed = o.seed;
  cfg.trials = o.trials;
  cfg.max_steps = o.max_steps;
  cfg.threads = o.threads;
  return cfg;
}

int execute(const std::string& command, const Options& o, std::ostream& out) {
  ValidationOptions vopts;
  vopts.renormalize = o.renormalize;
  vopts.row_sum_tol = o.tolerance;
  const ModelDocument doc = read_model_document(std::filesystem::path(o.model_path));
  const ChainModel model = to_chain_model(doc, vopts);
  const std::map<std::string, std::string> metadata = doc.metadata.value_or(std::map<std::string, std::string>{});
  const std::string name = doc.name.value_or(std::filesystem::path(o.model_path).stem().string());
  const auto starts = resolve_starts(model, o.starts);

  AnalysisRequest req;
  if (command == "evolve") {
    req.evolution_steps = o.steps;
  } else if (command == "stationary") {
    req.stationary = true;
    req.method = o.method == "power" ? StationaryMethod::PowerIteration : StationaryMethod::DirectSolve;
    req.max_iters = o.max_iters;
    req.power_tol = o.power_tol;
  } else if (command == "absorb") {
    req.absorbing = true;
    req.starts = starts;
  } else if (command == "simulate") {
    SimulationRequest sim;
    sim.config = simulation_config(o);
    if (o.quantity == "step") {
      sim.kind = SimulationKind::Step;
      sim.steps = o.steps;
      if (starts.size() > 1) {
        throw ChainError(ErrorCode::InvalidConfig, "step simulation takes at most one --start", "--start");
      }
      if (!starts.empty()) sim.config.start = starts.front();
    } else if (o.quantity == "occupancy") {
      sim.kind = SimulationKind::Occupancy;
      if (starts.size() > 1) {
        throw ChainError(ErrorCode::InvalidConfig, "occupancy simulation takes at most one --start", "--start");
      }
      if (!starts.empty()) sim.config.start = starts.front();
    } else {
      sim.kind = SimulationKind::Absorption;
      sim.starts = starts;
    }
    req.simulation = std::move(sim);
  } else if (command == "report") {
    req.applicable_only = true;
    req.stationary = true;
    req.absorbing = true;
    req.starts = starts;
    req.evolution_steps = o.steps;
    req.max_iters = o.max_iters;
    req.power_tol = o.power_tol;
    if (o.trials > 0) {
      SimulationRequest sim;
      sim.config = simulation_config(o);
      sim.starts = starts;
      req.simulation = std::move(sim);
    }
  }

  const AnalysisReport report = analyze(model, req, name, metadata);
  const ReportFormat format = o.format == "json" ? ReportFormat::Json : ReportFormat::Human;
  if (command == "validate" && format == ReportFormat::Human) {
    out << "valid: " << name << " (" << model.size() << " states, "
        << to_string(report.classification.chain_type) << ")\n";
    for (const auto& w : report.warnings) out << "warning: " << w << '\n';
    return kSuccess;
  }
  out << render_report(report, format);
  return kSuccess;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite Markov chain analysis: classification, evolution, stationary and absorbing analysis, simulation",
               "chainlab"};
  app.require_subcommand(1);
  app.fallthrough();

  Options o;
  app.add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"human", "json"}))
      ->capture_default_str();
  app.add_flag("--renormalize", o.renormalize,
               "Rescale rows whose sum is within 1e-6 of 1 instead of rejecting them");
  app.add_option("--tolerance", o.tolerance, "Row-sum tolerance for validation")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  auto add_model = [&](CLI::App* sub) {
    sub->add_option("model", o.model_path, "Model file (JSON)")->required();
  };

  auto* validate = app.add_subcommand("validate", "Check a model file");
  add_model(validate);

  auto* classify = app.add_subcommand("classify", "Classify the chain as ergodic, absorbing or other");
  add_model(classify);

  auto* evolve = app.add_subcommand("evolve", "Distribution after K steps from the initial vector");
  evolve->add_option("--steps", o.steps, "Step count K (repeatable)")->required();
  add_model(evolve);

  auto* stationary = app.add_subcommand("stationary", "Stationary distribution of an ergodic chain");
  stationary->add_option("--method", o.method, "Solver")
      ->check(CLI::IsMember({"direct", "power"}))
      ->capture_default_str();
  stationary->add_option("--max-iters", o.max_iters, "Power-iteration limit")->capture_default_str();
  stationary->add_option("--tol", o.power_tol, "Power-iteration convergence threshold");
  add_model(stationary);

  auto* absorb = app.add_subcommand("absorb", "Fundamental matrix, absorption probabilities and times");
  absorb->add_option("--start", o.starts, "Start state for weighted times (repeatable)");
  add_model(absorb);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates");
  simulate->add_option("--trials", o.trials, "Trajectories")->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  simulate->add_option("--max-steps", o.max_steps, "Trajectory length limit")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--quantity", o.quantity, "What to estimate")
      ->check(CLI::IsMember({"step", "occupancy", "absorption"}))
      ->required();
  simulate->add_option("--steps", o.steps, "Step count for --quantity step (repeatable)");
  simulate->add_option("--start", o.starts, "Start state (repeatable for absorption)");
  simulate->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  add_model(simulate);

  auto* report = app.add_subcommand("report", "Run every analysis that applies to the chain");
  report->add_option("--steps", o.steps, "Evolution step counts (repeatable)");
  report->add_option("--start", o.starts, "Start states for weighted times (repeatable)");
  report->add_option("--trials", o.trials, "Also simulate with this many trajectories (0 = no simulation)");
  report->add_option("--seed", o.seed, "Random seed");
  report->add_option("--max-steps", o.max_steps, "Trajectory length limit")->check(CLI::PositiveNumber);
  report->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  add_model(report);

  std::vector<const char*> argv{"chainlab"};
  for (const auto& a : args) argv.push_back(a.c_str());

  o.trials = 0;  // report simulates only when --trials is given
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kSuccess;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsageError;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  if (chosen == simulate && simulate->count("--trials") == 0) o.trials = 100000;

  try {
    return execute(chosen->get_name(), o, out);
  } catch (const ChainError& e) {
    err << "error: " << e.what() << '\n';
    return kAnalysisError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kAnalysisError;
  }
}

}  // namespace chainlab::cli
