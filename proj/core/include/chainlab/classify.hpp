#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "chainlab/stochastic.hpp"

namespace chainlab {

// Any strictly positive probability counts as an edge of the transition graph.
inline constexpr double kEdgeEps = 0.0;

enum class ChainType { Ergodic, Absorbing, ReducibleOther };

const char* to_string(ChainType type) noexcept;

/// Boolean n×n matrix stored row-major.
class Reachability {
 public:
  explicit Reachability(std::size_t n) : n_(n), bits_(n * n, false) {}

  std::size_t size() const noexcept { return n_; }
  bool operator()(std::size_t from, std::size_t to) const { return bits_[from * n_ + to]; }
  void set(std::size_t from, std::size_t to) { bits_[from * n_ + to] = true; }

  friend bool operator==(const Reachability&, const Reachability&) = default;

 private:
  std::size_t n_;
  std::vector<bool> bits_;
};

struct ClassificationReport {
  ChainType chain_type = ChainType::ReducibleOther;
  std::vector<std::size_t> absorbing_states;  // ascending
  // Strongly connected components; each sorted ascending, ordered by smallest member.
  std::vector<std::vector<std::size_t>> communicating_classes;
  std::optional<std::size_t> period;  // set iff Ergodic
  bool is_regular = false;
};

/// States with self-transition probability >= 1 - row_sum_tol.
std::vector<std::size_t> absorbing_states(const StochasticMatrix& a, double row_sum_tol = kRowSumTol);

/// Adjacency lists of edges {(i, j) : p_ij > kEdgeEps}.
std::vector<std::vector<std::size_t>> transition_graph(const StochasticMatrix& a);

/// (i, j) is set iff j is reachable from i by a path of one or more edges.
Reachability reachability(const StochasticMatrix& a);

std::vector<std::vector<std::size_t>> communicating_classes(const StochasticMatrix& a);

/// Period of the strongly connected class containing `members` (gcd of cycle
/// lengths through any member), or nullopt if the class has no internal edge.
std::optional<std::size_t> class_period(const StochasticMatrix& a,
                                        const std::vector<std::size_t>& members);

ClassificationReport classify(const StochasticMatrix& a);
ClassificationReport classify(const ChainModel& model);

}  // namespace chainlab
