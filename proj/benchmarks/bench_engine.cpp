#include <benchmark/benchmark.h>

#include "dynq/adversary.hpp"
#include "dynq/engine.hpp"
#include "dynq/verify.hpp"

namespace {

void BM_Alg1Concurrent(benchmark::State& state) {
  dynq::ScenarioConfig cfg;
  cfg.n = static_cast<std::uint32_t>(state.range(0));
  cfg.k = cfg.n - 1;
  cfg.adversary = dynq::AdversaryKind::oblivious_random(0);
  for (auto _ : state) benchmark::DoNotOptimize(dynq::run(cfg));
  state.counters["rounds"] = static_cast<double>(2 * cfg.n * cfg.k);
}
BENCHMARK(BM_Alg1Concurrent)->Arg(8)->Arg(16)->Arg(32);

void BM_Alg2TStable(benchmark::State& state) {
  dynq::ScenarioConfig cfg;
  cfg.algorithm = dynq::Algorithm::Alg2;
  cfg.n = 16;
  cfg.k = 15;
  cfg.T = static_cast<std::uint32_t>(state.range(0));
  cfg.adversary = dynq::AdversaryKind::t_stable(0, 0);
  for (auto _ : state) benchmark::DoNotOptimize(dynq::run(cfg));
}
BENCHMARK(BM_Alg2TStable)->Arg(1)->Arg(4)->Arg(16);

void BM_AdaptiveLine(benchmark::State& state) {
  dynq::ScenarioConfig cfg;
  cfg.n = static_cast<std::uint32_t>(state.range(0));
  cfg.k = cfg.n / 2;
  cfg.adversary = dynq::AdversaryKind::adaptive_line();
  for (auto _ : state) benchmark::DoNotOptimize(dynq::run(cfg));
}
BENCHMARK(BM_AdaptiveLine)->Arg(8)->Arg(32);

void BM_RandomSpanningTree(benchmark::State& state) {
  const auto n = static_cast<std::uint32_t>(state.range(0));
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(dynq::random_connected_edges(n, 1, i++, 0, 0.0));
}
BENCHMARK(BM_RandomSpanningTree)->Arg(16)->Arg(128);

void BM_VerifyTrace(benchmark::State& state) {
  dynq::ScenarioConfig cfg;
  cfg.n = static_cast<std::uint32_t>(state.range(0));
  cfg.k = cfg.n - 1;
  cfg.adversary = dynq::AdversaryKind::oblivious_random(0);
  const auto result = dynq::run(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(dynq::verify_trace(result.trace));
}
BENCHMARK(BM_VerifyTrace)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
