#include "chainlab/classify.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

namespace chainlab {

const char* to_string(ChainType type) noexcept {
  switch (type) {
    case ChainType::Ergodic: return "Ergodic";
    case ChainType::Absorbing: return "Absorbing";
    case ChainType::ReducibleOther: return "ReducibleOther";
  }
  return "Unknown";
}

std::vector<std::size_t> absorbing_states(const StochasticMatrix& a, double row_sum_tol) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a(i, i) >= 1.0 - row_sum_tol) out.push_back(i);
  }
  return out;
}

std::vector<std::vector<std::size_t>> transition_graph(const StochasticMatrix& a) {
  const std::size_t n = a.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (a(i, j) > kEdgeEps) adj[i].push_back(j);
  return adj;
}

Reachability reachability(const StochasticMatrix& a) {
  const auto adj = transition_graph(a);
  const std::size_t n = a.size();
  Reachability reach(n);
  std::vector<std::size_t> stack;
  std::vector<bool> seen(n);
  for (std::size_t src = 0; src < n; ++src) {
    std::fill(seen.begin(), seen.end(), false);
    // Seed with successors so that src itself is reached only via a cycle.
    for (std::size_t v : adj[src]) {
      if (!seen[v]) {
        seen[v] = true;
        stack.push_back(v);
      }
    }
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      reach.set(src, u);
      for (std::size_t v : adj[u]) {
        if (!seen[v]) {
          seen[v] = true;
          stack.push_back(v);
        }
      }
    }
  }
  return reach;
}

namespace {

// Iterative Tarjan.
class TarjanScc {
 public:
  explicit TarjanScc(const std::vector<std::vector<std::size_t>>& adj)
      : adj_(adj), index_(adj.size(), kUnvisited), low_(adj.size(), 0), on_stack_(adj.size()) {}

  std::vector<std::vector<std::size_t>> run() {
    for (std::size_t v = 0; v < adj_.size(); ++v) {
      if (index_[v] == kUnvisited) visit(v);
    }
    for (auto& c : components_) std::sort(c.begin(), c.end());
    std::sort(components_.begin(), components_.end(),
              [](const auto& x, const auto& y) { return x.front() < y.front(); });
    return std::move(components_);
  }

 private:
  static constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);

  void visit(std::size_t root) {
    std::vector<std::pair<std::size_t, std::size_t>> frames{{root, 0}};
    open(root);
    while (!frames.empty()) {
      auto& [v, next_edge] = frames.back();
      if (next_edge < adj_[v].size()) {
        const std::size_t w = adj_[v][next_edge++];
        if (index_[w] == kUnvisited) {
          open(w);
          frames.emplace_back(w, 0);
        } else if (on_stack_[w]) {
          low_[v] = std::min(low_[v], index_[w]);
        }
        continue;
      }
      const std::size_t done = v;
      frames.pop_back();
      if (!frames.empty()) {
        const std::size_t parent = frames.back().first;
        low_[parent] = std::min(low_[parent], low_[done]);
      }
      if (low_[done] == index_[done]) {
        std::vector<std::size_t> comp;
        std::size_t w;
        do {
          w = stack_.back();
          stack_.pop_back();
          on_stack_[w] = false;
          comp.push_back(w);
        } while (w != done);
        components_.push_back(std::move(comp));
      }
    }
  }

  void open(std::size_t v) {
    index_[v] = low_[v] = counter_++;
    stack_.push_back(v);
    on_stack_[v] = true;
  }

  const std::vector<std::vector<std::size_t>>& adj_;
  std::vector<std::size_t> index_;
  std::vector<std::size_t> low_;
  std::vector<bool> on_stack_;
  std::vector<std::size_t> stack_;
  std::vector<std::vector<std::size_t>> components_;
  std::size_t counter_ = 0;
};

}  // namespace

std::vector<std::vector<std::size_t>> communicating_classes(const StochasticMatrix& a) {
  const auto adj = transition_graph(a);
  return TarjanScc(adj).run();
}

std::optional<std::size_t> class_period(const StochasticMatrix& a,
                                        const std::vector<std::size_t>& members) {
  if (members.empty()) return std::nullopt;
  const std::size_t n = a.size();
  std::vector<bool> in_class(n, false);
  for (auto m : members) in_class[m] = true;

  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> level(n, kNone);
  std::deque<std::size_t> queue{members.front()};
  level[members.front()] = 0;
  std::size_t g = 0;
  bool has_edge = false;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v = 0; v < n; ++v) {
      if (!in_class[v] || !(a(u, v) > kEdgeEps)) continue;
      has_edge = true;
      if (level[v] == kNone) {
        level[v] = level[u] + 1;
        queue.push_back(v);
      } else {
        // BFS levels satisfy level(v) <= level(u) + 1 for every edge u -> v.
        g = std::gcd(g, level[u] + 1 - level[v]);
      }
    }
  }
  if (!has_edge) return std::nullopt;
  return g;
}

ClassificationReport classify(const StochasticMatrix& a) {
  ClassificationReport report;
  report.absorbing_states = absorbing_states(a);
  report.communicating_classes = communicating_classes(a);

  if (report.communicating_classes.size() == 1) {
    report.chain_type = ChainType::Ergodic;
    report.period = class_period(a, report.communicating_classes.front());
    report.is_regular = report.period == std::size_t{1};
    return report;
  }

  if (!report.absorbing_states.empty()) {
    const auto reach = reachability(a);
    std::vector<bool> is_absorbing(a.size(), false);
    for (auto s : report.absorbing_states) is_absorbing[s] = true;
    bool all_reach = true;
    for (std::size_t i = 0; i < a.size() && all_reach; ++i) {
      if (is_absorbing[i]) continue;
      all_reach = std::any_of(report.absorbing_states.begin(), report.absorbing_states.end(),
                              [&](std::size_t s) { return reach(i, s); });
    }
    if (all_reach) report.chain_type = ChainType::Absorbing;
  }
  return report;
}

ClassificationReport classify(const ChainModel& model) { return classify(model.matrix()); }

}  // namespace chainlab
