#include <benchmark/benchmark.h>

#include <cstdint>

#include "cellprobe/reduction.hpp"

using namespace cellprobe;

namespace {

ButterflySubgraph instance_for(const benchmark::State& state) {
  const ButterflyShape shape(static_cast<unsigned>(state.range(0)), static_cast<unsigned>(state.range(1)));
  return random_subgraph(shape, 0.3, 7);
}

void BM_BuildStore(benchmark::State& state) {
  const ReductionInstance inst = build_instance(instance_for(state));
  for (auto _ : state) {
    PersistentStore store = build_reduction_store(inst);
    benchmark::DoNotOptimize(store.measured_s());
  }
  state.counters["m"] = static_cast<double>(inst.version_tree().total_updates());
}

void BM_AnswerReachability(benchmark::State& state) {
  const ReductionInstance inst = build_instance(instance_for(state));
  const PersistentStore store = build_reduction_store(inst);
  const std::uint64_t n = inst.shape().nodes_per_layer();
  std::uint64_t k = 0;
  QueryStats stats;
  for (auto _ : state) {
    const std::uint64_t s = k % n, t = (k / n) % n;
    benchmark::DoNotOptimize(answer_reachability(inst, store, s, t, &stats));
    ++k;
  }
  state.counters["probes/query"] = benchmark::Counter(static_cast<double>(stats.probes) / static_cast<double>(k));
}

void BM_PathOracle(benchmark::State& state) {
  const ButterflySubgraph g = instance_for(state);
  const std::uint64_t n = g.shape().nodes_per_layer();
  std::uint64_t k = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(oracle_reachable(g, k % n, (k / n) % n));
    ++k;
  }
}

}  // namespace

BENCHMARK(BM_BuildStore)->Args({2, 2})->Args({2, 4})->Args({3, 3})->Args({2, 8});
BENCHMARK(BM_AnswerReachability)->Args({2, 2})->Args({2, 4})->Args({3, 3})->Args({2, 8});
BENCHMARK(BM_PathOracle)->Args({2, 4})->Args({2, 8});

BENCHMARK_MAIN();
