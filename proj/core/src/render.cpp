#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "chainlab/report.hpp"

namespace chainlab {

namespace {

using nlohmann::json;

std::string g6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<std::string> pick(const std::vector<std::string>& labels,
                              std::span<const std::size_t> idx) {
  std::vector<std::string> out;
  out.reserve(idx.size());
  for (auto i : idx) out.push_back(labels[i]);
  return out;
}

// ---- json ----------------------------------------------------------------

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

json to_json(const AnalysisReport& r) {
  json out;
  out["model"] = {{"name", r.model_name}, {"states", r.labels}};

  const auto& c = r.classification;
  json cls = {{"chain_type", to_string(c.chain_type)},
              {"absorbing_states", pick(r.labels, c.absorbing_states)},
              {"is_regular", c.is_regular}};
  json classes = json::array();
  for (const auto& cc : c.communicating_classes) classes.push_back(pick(r.labels, cc));
  cls["communicating_classes"] = std::move(classes);
  if (c.period) cls["period"] = *c.period;
  out["classification"] = std::move(cls);

  if (r.stationary) {
    json st = {{"method", to_string(r.stationary->method)},
               {"states", r.labels},
               {"pi", r.stationary->pi.values()},
               {"residual", r.stationary->residual}};
    if (r.stationary->method == StationaryMethod::PowerIteration) {
      st["iterations"] = r.stationary->iterations;
    }
    out["stationary"] = std::move(st);
  }

  if (r.absorbing) {
    const auto& d = r.absorbing->decomposition;
    json ab = {{"canonical_order", pick(r.labels, d.form.canonical_order)},
               {"absorbing_states", pick(r.labels, d.form.absorbing())},
               {"transient_states", pick(r.labels, d.form.transient())},
               {"k", d.form.k},
               {"Q", matrix_json(d.form.Q)},
               {"R", matrix_json(d.form.R)},
               {"N", matrix_json(d.N)},
               {"B", matrix_json(d.B)},
               {"t", d.t}};
    if (!r.absorbing->weighted_times.empty()) {
      json wt = json::object();
      for (const auto& [s, v] : r.absorbing->weighted_times) wt[r.labels[s]] = v;
      ab["weighted_times"] = std::move(wt);
    }
    out["absorbing"] = std::move(ab);
  }

  if (r.evolution) {
    json ev = json::array();
    for (const auto& e : *r.evolution) ev.push_back({{"k", e.k}, {"p", e.p.values()}});
    out["evolution"] = std::move(ev);
  }

  if (r.simulation) {
    json est = json::array();
    for (const auto& rec : r.simulation->records) {
      const auto& e = rec.estimate;
      json j = {{"quantity", to_string(e.quantity)},
                {"labels", e.labels},
                {"value", e.value},
                {"std_error", e.std_error},
                {"trials", e.trials},
                {"truncated_trajectories", e.truncated_trajectories}};
      if (rec.start) j["start"] = r.labels[*rec.start];
      if (rec.k) j["k"] = *rec.k;
      est.push_back(std::move(j));
    }
    out["simulation"] = {{"seed", r.simulation->seed},
                         {"trials", r.simulation->trials},
                         {"max_steps", r.simulation->max_steps},
                         {"estimates", std::move(est)}};
  }

  out["warnings"] = r.warnings;
  return out;
}

// ---- human ---------------------------------------------------------------

class Table {
 public:
  explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  void print(std::ostream& os, const std::string& indent = "  ") const {
    std::vector<std::size_t> width;
    for (const auto& row : rows_) {
      if (width.size() < row.size()) width.resize(row.size(), 0);
      for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    }
    for (const auto& row : rows_) {
      os << indent;
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) os << "  ";
        os << row[i];
        if (i + 1 < row.size()) os << std::string(width[i] - row[i].size(), ' ');
      }
      os << '\n';
    }
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

void print_matrix(std::ostream& os, const std::string& title, const Matrix& m,
                  const std::vector<std::string>& row_labels,
                  const std::vector<std::string>& col_labels) {
  os << "  " << title << ":\n";
  std::vector<std::string> header{""};
  header.insert(header.end(), col_labels.begin(), col_labels.end());
  Table t(std::move(header));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::vector<std::string> row{row_labels[r]};
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(g6(m(r, c)));
    t.add(std::move(row));
  }
  t.print(os, "    ");
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ", ";
    out += s;
  }
  return out;
}

std::string to_human(const AnalysisReport& r) {
  std::ostringstream os;
  os << "model: " << (r.model_name.empty() ? "(unnamed)" : r.model_name) << " (" << r.labels.size()
     << " states: " << join(r.labels) << ")\n";

  const auto& c = r.classification;
  os << "classification: " << to_string(c.chain_type);
  if (c.period) os << ", period " << *c.period << (c.is_regular ? ", regular" : ", not regular");
  os << '\n';
  os << "  absorbing states: "
     << (c.absorbing_states.empty() ? "none" : join(pick(r.labels, c.absorbing_states))) << '\n';
  os << "  communicating classes:";
  for (const auto& cc : c.communicating_classes) os << " {" << join(pick(r.labels, cc)) << "}";
  os << '\n';

  if (r.evolution) {
    os << "evolution:\n";
    std::vector<std::string> header{"k"};
    header.insert(header.end(), r.labels.begin(), r.labels.end());
    Table t(std::move(header));
    for (const auto& e : *r.evolution) {
      std::vector<std::string> row{std::to_string(e.k)};
      for (double p : e.p.values()) row.push_back(g6(p));
      t.add(std::move(row));
    }
    t.print(os);
  }

  if (r.stationary) {
    os << "stationary distribution (" << to_string(r.stationary->method) << ", residual "
       << g6(r.stationary->residual);
    if (r.stationary->method == StationaryMethod::PowerIteration) {
      os << ", " << r.stationary->iterations << " iterations";
    }
    os << "):\n";
    Table t({"state", "pi"});
    for (std::size_t i = 0; i < r.labels.size(); ++i) t.add({r.labels[i], g6(r.stationary->pi[i])});
    t.print(os);
  }

  if (r.absorbing) {
    const auto& d = r.absorbing->decomposition;
    const auto abs = pick(r.labels, d.form.absorbing());
    const auto tr = pick(r.labels, d.form.transient());
    os << "absorbing analysis:\n";
    os << "  canonical order: " << join(pick(r.labels, d.form.canonical_order)) << '\n';
    if (!tr.empty()) {
      print_matrix(os, "Q (transient -> transient)", d.form.Q, tr, tr);
      print_matrix(os, "R (transient -> absorbing)", d.form.R, tr, abs);
      print_matrix(os, "fundamental matrix N (expected visits, row = start)", d.N, tr, tr);
      print_matrix(os, "absorption probabilities B = N·R", d.B, tr, abs);
      os << "  expected steps to absorption t = N·1:\n";
      Table t({"start", "t"});
      for (std::size_t i = 0; i < tr.size(); ++i) t.add({tr[i], g6(d.t[i])});
      t.print(os, "    ");
    } else {
      os << "  no transient states\n";
    }
    for (const auto& [s, v] : r.absorbing->weighted_times) {
      os << "  weighted absorption time from " << r.labels[s] << ": " << g6(v) << '\n';
    }
  }

  if (r.simulation) {
    os << "simulation (seed " << r.simulation->seed << ", " << r.simulation->trials
       << " trials, max_steps " << r.simulation->max_steps << "):\n";
    for (const auto& rec : r.simulation->records) {
      const auto& e = rec.estimate;
      os << "  " << to_string(e.quantity);
      if (rec.start) os << " from " << r.labels[*rec.start];
      if (rec.k) os << " at k=" << *rec.k;
      if (e.truncated_trajectories) os << " (" << e.truncated_trajectories << " truncated)";
      os << ":\n";
      Table t({"", "estimate", "std_error"});
      for (std::size_t i = 0; i < e.value.size(); ++i) {
        t.add({e.labels.empty() ? "value" : e.labels[i], g6(e.value[i]), g6(e.std_error[i])});
      }
      t.print(os, "    ");
    }
  }

  if (!r.warnings.empty()) {
    os << "warnings:\n";
    for (const auto& w : r.warnings) os << "  - " << w << '\n';
  }
  return os.str();
}

}  // namespace

std::string render_report(const AnalysisReport& report, ReportFormat format) {
  if (format == ReportFormat::Json) return to_json(report).dump(2) + "\n";
  return to_human(report);
}

}  // namespace chainlab
