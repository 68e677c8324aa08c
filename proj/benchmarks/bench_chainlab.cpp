#include <benchmark/benchmark.h>

#include <random>

#include "chainlab/absorbing.hpp"
#include "chainlab/ergodic.hpp"
#include "chainlab/monte_carlo.hpp"
#include "chainlab/stochastic.hpp"

namespace {

using namespace chainlab;

ChainModel random_regular(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  RawChain raw;
  for (std::size_t i = 0; i < n; ++i) raw.labels.push_back("s" + std::to_string(i));
  raw.transitions.assign(n, std::vector<double>(n));
  for (auto& row : raw.transitions) {
    double total = 0.0;
    for (double& v : row) total += v = u(rng);
    for (double& v : row) v /= total;
  }
  raw.initial = std::vector<double>(n, 1.0 / static_cast<double>(n));
  return validate_model(raw);
}

// Birth-death walk with absorbing ends.
ChainModel gambler(std::size_t n) {
  RawChain raw;
  for (std::size_t i = 0; i < n; ++i) raw.labels.push_back("s" + std::to_string(i));
  raw.transitions.assign(n, std::vector<double>(n, 0.0));
  raw.transitions[0][0] = 1.0;
  raw.transitions[n - 1][n - 1] = 1.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    raw.transitions[i][i - 1] = 0.5;
    raw.transitions[i][i + 1] = 0.5;
  }
  return validate_model(raw);
}

void BM_Evolve(benchmark::State& state) {
  const auto model = random_regular(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(evolve(model, 1000));
  state.SetItemsProcessed(state.iterations() * 1000);
}
BENCHMARK(BM_Evolve)->Arg(4)->Arg(16)->Arg(64);

void BM_StationaryDirect(benchmark::State& state) {
  const auto model = random_regular(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(stationary_direct(model));
}
BENCHMARK(BM_StationaryDirect)->Arg(4)->Arg(16)->Arg(64);

void BM_StationaryPower(benchmark::State& state) {
  const auto model = random_regular(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(stationary_power(model));
}
BENCHMARK(BM_StationaryPower)->Arg(4)->Arg(16)->Arg(64);

void BM_FundamentalLu(benchmark::State& state) {
  const auto form = canonical_form(gambler(static_cast<std::size_t>(state.range(0)) + 2));
  for (auto _ : state) benchmark::DoNotOptimize(fundamental_matrix(form.Q));
}
BENCHMARK(BM_FundamentalLu)->DenseRange(2, 6, 2)->Arg(32);

void BM_FundamentalAdjugate(benchmark::State& state) {
  const auto form = canonical_form(gambler(static_cast<std::size_t>(state.range(0)) + 2));
  for (auto _ : state) benchmark::DoNotOptimize(fundamental_matrix_adjugate(form.Q));
}
BENCHMARK(BM_FundamentalAdjugate)->DenseRange(2, 6, 2);

void BM_SimulateAbsorption(benchmark::State& state) {
  const auto model = gambler(7);
  SimulationConfig cfg;
  cfg.trials = 10000;
  cfg.threads = 1;
  cfg.start = std::size_t{3};
  for (auto _ : state) benchmark::DoNotOptimize(simulate_absorption(model, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cfg.trials));
}
BENCHMARK(BM_SimulateAbsorption);

}  // namespace

BENCHMARK_MAIN();
