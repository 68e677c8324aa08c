#include "chainlab/report.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "chainlab/error.hpp"

namespace chainlab {

namespace {

std::string g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<std::size_t> transient_starts(const CanonicalForm& form,
                                          const std::vector<std::size_t>& requested,
                                          const StateSpace& states) {
  if (requested.empty()) return {form.transient().begin(), form.transient().end()};
  for (auto s : requested) {
    if (!form.transient_position(s)) {
      throw ChainError(ErrorCode::StartNotTransient,
                       "start state '" + states.label(s) + "' is absorbing");
    }
  }
  return requested;
}

std::vector<std::string> periodicity_warnings(const ClassificationReport& c) {
  std::vector<std::string> out;
  if (c.chain_type == ChainType::Ergodic && c.period && *c.period > 1) {
    out.push_back("chain is periodic with period " + std::to_string(*c.period) +
                  ": P_k oscillates instead of converging, power iteration and occupancy "
                  "simulation do not apply; the stationary vector is a long-run time average");
  }
  if (c.chain_type == ChainType::ReducibleOther) {
    out.push_back(
        "chain is neither ergodic nor absorbing: stationary and absorbing analyses do not apply");
  }
  return out;
}

void run_simulation(const ChainModel& model, const AnalysisRequest& request,
                    const SimulationRequest& sim, AnalysisReport& report) {
  SimulationSection section;
  section.seed = sim.config.seed;
  section.trials = sim.config.trials;
  section.max_steps = sim.config.max_steps;
  const auto& c = report.classification;
  const bool auto_kind = !sim.kind.has_value();

  auto wants = [&](SimulationKind k) { return auto_kind || *sim.kind == k; };

  if (wants(SimulationKind::Step)) {
    auto ks = sim.steps.empty() ? request.evolution_steps : sim.steps;
    const bool has_start = sim.config.start.has_value() || model.initial().has_value();
    if (!auto_kind && ks.empty()) ks.push_back(0);
    if (!auto_kind || (has_start && !ks.empty())) {
      for (auto k : ks) {
        section.records.push_back({simulate_step_distribution(model, k, sim.config), std::nullopt, k});
      }
    }
  }
  if (wants(SimulationKind::Occupancy) && (!auto_kind || c.is_regular)) {
    section.records.push_back({simulate_occupancy(model, sim.config), std::nullopt, std::nullopt});
  }
  if (wants(SimulationKind::Absorption) && (!auto_kind || c.chain_type == ChainType::Absorbing)) {
    const auto form = canonical_form(model);
    for (auto s : transient_starts(form, sim.starts, model.states())) {
      SimulationConfig cfg = sim.config;
      cfg.start = s;
      auto est = simulate_absorption(model, cfg);
      section.records.push_back({std::move(est.absorption), s, std::nullopt});
      section.records.push_back({std::move(est.visits), s, std::nullopt});
      section.records.push_back({std::move(est.steps), s, std::nullopt});
      if (est.weighted_time) section.records.push_back({std::move(*est.weighted_time), s, std::nullopt});
    }
  }
  for (const auto& r : section.records) {
    if (r.estimate.truncated_trajectories > 0) {
      report.warnings.push_back(std::to_string(r.estimate.truncated_trajectories) + " of " +
                                std::to_string(r.estimate.trials) + " " +
                                to_string(r.estimate.quantity) +
                                " trajectories hit max_steps and were excluded");
    }
  }
  report.simulation = std::move(section);
}

}  // namespace

AnalysisReport analyze(const ChainModel& model, const AnalysisRequest& request,
                       std::string model_name, const std::map<std::string, std::string>& metadata) {
  AnalysisReport report;
  report.model_name = std::move(model_name);
  report.labels = model.states().labels();
  report.classification = classify(model);
  const auto& states = model.states();

  if (!model.renormalized_rows().empty()) {
    std::string rows;
    for (auto r : model.renormalized_rows()) {
      if (!rows.empty()) rows += ", ";
      rows += states.label(r);
    }
    report.warnings.push_back("renormalized transition rows to unit sum: " + rows);
  }
  for (auto& w : periodicity_warnings(report.classification)) report.warnings.push_back(std::move(w));

  const auto type = report.classification.chain_type;

  if (!request.evolution_steps.empty() && (!request.applicable_only || model.initial())) {
    std::vector<EvolutionEntry> entries;
    for (auto& [k, p] : evolve_at(model, request.evolution_steps)) entries.push_back({k, std::move(p)});
    report.evolution = std::move(entries);
  }

  if (request.stationary && (!request.applicable_only || type == ChainType::Ergodic)) {
    if (request.method == StationaryMethod::PowerIteration) {
      report.stationary = stationary_power(model, request.max_iters, request.power_tol);
    } else {
      report.stationary = stationary_direct(model);
      if (request.applicable_only && report.classification.is_regular) {
        const auto power = stationary_power(model, request.max_iters, request.power_tol);
        const double gap = max_abs_diff(power.pi.span(), report.stationary->pi.span());
        if (gap > 1e-8) {
          report.warnings.push_back("power iteration differs from the direct solve by " + g6(gap));
        }
      }
    }
  }

  if (request.absorbing && (!request.applicable_only || type == ChainType::Absorbing)) {
    AbsorbingSummary summary{analyze_absorbing(model), {}};
    const auto starts = transient_starts(summary.decomposition.form, request.starts, states);
    if (model.weights()) {
      const StateWeights none;
      const auto& terminal = model.terminal_weights() ? *model.terminal_weights() : none;
      const std::optional<double> shared =
          model.terminal_weights() ? std::nullopt : std::optional<double>(0.0);
      for (auto s : starts) {
        summary.weighted_times[s] = weighted_absorption_time(summary.decomposition, *model.weights(),
                                                             terminal, s, shared);
      }
    }
    report.absorbing = std::move(summary);
  }

  if (request.simulation) run_simulation(model, request, *request.simulation, report);

  for (auto& w : check_claims(report, metadata)) report.warnings.push_back(std::move(w));
  return report;
}

namespace {

std::optional<std::size_t> label_index(const AnalysisReport& r, const std::string& label) {
  for (std::size_t i = 0; i < r.labels.size(); ++i)
    if (r.labels[i] == label) return i;
  return std::nullopt;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) parts.push_back(cur);
  return parts;
}

std::optional<double> parse_number(const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size() || !std::isfinite(v)) return std::nullopt;
    return v;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

}  // namespace

std::vector<std::string> check_claims(const AnalysisReport& report,
                                      const std::map<std::string, std::string>& metadata) {
  std::vector<std::string> warnings;
  double tol = kDefaultClaimTol;
  if (const auto it = metadata.find("claim.tolerance"); it != metadata.end()) {
    if (const auto v = parse_number(it->second)) tol = *v;
  }
  const std::string prefix = kClaimPrefix;
  // start -> (claimed sum, claimed count) for the absorption row-sum check
  std::map<std::string, std::pair<double, std::size_t>> absorption_rows;

  for (const auto& [key, text] : metadata) {
    if (key.rfind(prefix, 0) != 0 || key == "claim.tolerance") continue;
    const auto parts = split(key.substr(prefix.size()), '/');
    const auto claimed = parse_number(text);
    if (!claimed) {
      warnings.push_back("metadata '" + key + "' is not a number: '" + text + "'");
      continue;
    }
    std::vector<std::optional<std::size_t>> idx;
    bool unknown = false;
    for (std::size_t i = 1; i < parts.size(); ++i) {
      idx.push_back(label_index(report, parts[i]));
      if (!idx.back()) unknown = true;
    }
    if (unknown) {
      warnings.push_back("metadata '" + key + "' refers to an unknown state");
      continue;
    }
    const std::string& kind = parts.front();
    auto disagree = [&](double computed, const std::string& what, const std::string& hint = {}) {
      if (std::abs(computed - *claimed) <= tol) return;
      warnings.push_back("published value " + text + " for " + what + " disagrees with computed " +
                         g6(computed) + hint);
    };

    if (kind == "absorption" && parts.size() == 3 && report.absorbing) {
      const auto& d = report.absorbing->decomposition;
      const auto row = d.form.transient_position(*idx[0]);
      const auto col = d.form.absorbing_position(*idx[1]);
      if (!row || !col) {
        warnings.push_back("metadata '" + key + "' does not name a transient start and absorbing target");
        continue;
      }
      auto& acc = absorption_rows[parts[1]];
      acc.first += *claimed;
      acc.second += 1;
      std::string hint;
      for (std::size_t a = 0; a < d.form.k; ++a) {
        if (a != *col && std::abs(d.B(*row, a) - *claimed) <= tol) {
          hint = " (the published value matches absorption into '" +
                 report.labels[d.form.absorbing()[a]] + "' = " + g6(d.B(*row, a)) + ")";
          break;
        }
      }
      disagree(d.B(*row, *col),
               "absorption probability " + parts[1] + " -> " + parts[2], hint);
    } else if (kind == "expected_steps" && parts.size() == 2 && report.absorbing) {
      const auto& d = report.absorbing->decomposition;
      const auto row = d.form.transient_position(*idx[0]);
      if (!row) continue;
      disagree(d.t[*row], "expected time to absorption from " + parts[1],
               " (t = N·1, the unconditional expected number of transient steps, averaged over "
               "every absorbing outcome)");
    } else if (kind == "weighted_time" && parts.size() == 2 && report.absorbing) {
      const auto it = report.absorbing->weighted_times.find(*idx[0]);
      if (it == report.absorbing->weighted_times.end()) continue;
      disagree(it->second, "weighted absorption time from " + parts[1]);
    } else if (kind == "stationary" && parts.size() == 2 && report.stationary) {
      disagree(report.stationary->pi[*idx[0]], "stationary probability of " + parts[1]);
    }
  }

  if (report.absorbing) {
    const std::size_t k = report.absorbing->decomposition.form.k;
    for (const auto& [start, acc] : absorption_rows) {
      if (acc.second == k && std::abs(acc.first - 1.0) > tol) {
        warnings.push_back("published absorption probabilities from " + start + " sum to " +
                           g6(acc.first) + ", not 1; computed rows of B = N·R sum to 1");
      }
    }
  }
  return warnings;
}

}  // namespace chainlab
