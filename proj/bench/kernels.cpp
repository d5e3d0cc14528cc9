// Parallel kernels against their single-thread references on the shaped cohort's HIN.

#include <benchmark/benchmark.h>

#include "hinmhp/graph.hpp"
#include "hinmhp/graphlets.hpp"
#include "hinmhp/synth.hpp"
#include "hinmhp/walks.hpp"

using namespace hinmhp;

namespace {

const Graph& shaped_graph() {
  static const Graph g = [] {
    const auto data = nethealth_shaped();
    return homogeneous_view(build_hin(data.cohort, data.sms, Condition::Depression));
  }();
  return g;
}

void BM_gdv(benchmark::State& state) {
  const auto& g = shaped_graph();
  for (auto _ : state) benchmark::DoNotOptimize(gdv(g, 4));
}

void BM_gdv_serial(benchmark::State& state) {
  const auto& g = shaped_graph();
  for (auto _ : state) benchmark::DoNotOptimize(gdv_serial(g, 4));
}

void BM_random_walks(benchmark::State& state) {
  const auto& g = shaped_graph();
  for (auto _ : state) benchmark::DoNotOptimize(random_walks(g, {}));
}

void BM_random_walks_serial(benchmark::State& state) {
  const auto& g = shaped_graph();
  for (auto _ : state) benchmark::DoNotOptimize(random_walks_serial(g, {}));
}

}  // namespace

BENCHMARK(BM_gdv)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_gdv_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_random_walks)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_random_walks_serial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
