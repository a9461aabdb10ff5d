#include <benchmark/benchmark.h>

#include "rmab/harness.hpp"
#include "rmab/history.hpp"

namespace {

void BM_SamplePayoff(benchmark::State& state) {
  rmab::Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(rmab::sample_payoff(rng));
}
BENCHMARK(BM_SamplePayoff);

void BM_InnovateDraw(benchmark::State& state) {
  rmab::EnvConfig cfg;
  cfg.n_innovate = static_cast<int>(state.range(0));
  rmab::Rng rng(2);
  const auto board = rmab::initial_board(cfg, rng);
  for (auto _ : state) benchmark::DoNotOptimize(rmab::innovate_draw(board, cfg, rng, 1));
}
BENCHMARK(BM_InnovateDraw)->Arg(1)->Arg(10)->Arg(100);

void BM_GenerateHistory(benchmark::State& state) {
  rmab::EnvConfig cfg;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(rmab::generate_history(cfg, ++seed));
}
BENCHMARK(BM_GenerateHistory)->Unit(benchmark::kMillisecond);

void BM_FreshGame(benchmark::State& state) {
  rmab::EnvConfig cfg;
  cfg.n_innovate = 10;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(rmab::run_fresh_game(cfg, ++seed));
}
BENCHMARK(BM_FreshGame)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
