#include <benchmark/benchmark.h>

#include "relu_knots/construct.hpp"
#include "relu_knots/verify.hpp"

namespace {

using namespace relu_knots;

void BM_ExtractReferenceExample(benchmark::State& state) {
  const auto net = reference_example_network();
  for (auto _ : state) benchmark::DoNotOptimize(extract(net));
}
BENCHMARK(BM_ExtractReferenceExample)->Unit(benchmark::kMicrosecond);

void BM_BuildAndExtractTight(benchmark::State& state) {
  const Architecture arch{{5, 5, 5, 3}, 1, 1};
  for (auto _ : state) {
    const auto net = build_tight_network(arch);
    benchmark::DoNotOptimize(extract(net));
  }
}
BENCHMARK(BM_BuildAndExtractTight)->Unit(benchmark::kMillisecond);

void BM_DetectBySampling(benchmark::State& state) {
  const auto net = reference_example_network();
  const SamplingConfig cfg{Rational(-1), Rational(6), static_cast<std::size_t>(state.range(0)), 1e-6};
  for (auto _ : state) benchmark::DoNotOptimize(detect_knots_by_sampling(net, cfg));
}
BENCHMARK(BM_DetectBySampling)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_StressBound(benchmark::State& state) {
  const Architecture arch{{5, 5, 5}, 1, 1};
  for (auto _ : state) benchmark::DoNotOptimize(stress_bound(arch, 100, 0, 1));
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_StressBound)->Unit(benchmark::kMillisecond);

}  // namespace
