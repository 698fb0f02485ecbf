#include <benchmark/benchmark.h>

#include "recur/distribution.hpp"
#include "recur/divergence.hpp"
#include "recur/experiments.hpp"
#include "recur/overlap.hpp"

namespace {

using namespace recur;

std::vector<Symbol> random_word(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Symbol> w(n);
  for (auto& s : w) s = static_cast<Symbol>(rng.next() % 2);
  return w;
}

void BM_ShortestPath(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = random_word(n, 1);
  const auto y = random_word(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(shortest_path(x, y));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ShortestPath)->RangeMultiplier(4)->Range(16, 1 << 14)->Complexity(benchmark::oN);

void BM_DivergenceTransfer(benchmark::State& state) {
  const auto mu = Measure::markov(Alphabet::from_chars("abc"),
                                  Matrix({{0.6, 0.2, 0.2}, {0.2, 0.6, 0.2}, {0.2, 0.2, 0.6}}));
  const auto nu = Measure::markov(Alphabet::from_chars("abc"),
                                  Matrix({{0.5, 0.3, 0.2}, {0.25, 0.5, 0.25}, {0.2, 0.3, 0.5}}));
  const auto kmax = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(divergence_sequence(mu, nu, kmax));
}
BENCHMARK(BM_DivergenceTransfer)->Arg(64)->Arg(1024)->Arg(8192);

void BM_DivergenceEnum(benchmark::State& state) {
  const auto mu = Measure::bernoulli(0.3);
  const auto nu = Measure::bernoulli(0.6);
  const auto k = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(divergence_enum(mu, nu, k));
}
BENCHMARK(BM_DivergenceEnum)->DenseRange(8, 16, 4);

void BM_LawExact(benchmark::State& state) {
  const auto mu = Measure::markov(Alphabet::binary(), Matrix({{0.9, 0.1}, {0.5, 0.5}}));
  const auto nu = Measure::bernoulli(0.4);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(law_exact(mu, nu, n));
}
BENCHMARK(BM_LawExact)->DenseRange(8, 16, 4);

void BM_LawBruteforce(benchmark::State& state) {
  const auto mu = Measure::markov(Alphabet::binary(), Matrix({{0.9, 0.1}, {0.5, 0.5}}));
  const auto nu = Measure::bernoulli(0.4);
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(law_bruteforce(mu, nu, n));
}
BENCHMARK(BM_LawBruteforce)->DenseRange(6, 10, 2);

void BM_RateOscillation(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(rate_oscillation_demo(0.3, 8192));
}
BENCHMARK(BM_RateOscillation);

void BM_Concentration(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.mu = Measure::bernoulli(0.3);
  cfg.nu = Measure::bernoulli(0.7);
  cfg.schedule = {static_cast<std::size_t>(state.range(0))};
  cfg.samples = 1000;
  for (auto _ : state) benchmark::DoNotOptimize(concentration_experiment(cfg));
}
BENCHMARK(BM_Concentration)->Arg(64)->Arg(512);

}  // namespace

BENCHMARK_MAIN();
