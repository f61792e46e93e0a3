#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "relu_knots/spline.hpp"

namespace {

using relu_knots::Breakpoint;
using relu_knots::LinearSpline;
using relu_knots::Rational;

// Random spline with `knots` breakpoints whose values cross zero often.
LinearSpline wiggly(std::size_t knots, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> delta(-20, 20), den(1, 9);
  std::vector<Breakpoint> bps;
  Rational slope(1);
  for (std::size_t i = 0; i < knots; ++i) {
    // alternate the slope sign so every piece has a root nearby
    Rational next(slope.sign() > 0 ? -(1 + delta(rng) % 5 + 5) : 6 + delta(rng) % 5, den(rng));
    bps.push_back({Rational(static_cast<std::int64_t>(i)), next - slope});
    slope = next;
  }
  return LinearSpline::from_breakpoints(Rational(1), Rational(0), std::move(bps));
}

void BM_Relu(benchmark::State& state) {
  const auto f = wiggly(static_cast<std::size_t>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(relu(f));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Relu)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

void BM_AffineCombine(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<LinearSpline> fs;
  std::vector<Rational> c;
  for (std::uint64_t i = 0; i < 5; ++i) {
    fs.push_back(wiggly(n, i));
    c.push_back(Rational(static_cast<std::int64_t>(i) - 2, 3));
  }
  for (auto _ : state) benchmark::DoNotOptimize(affine_combine(c, fs, Rational(1, 2)));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_AffineCombine)->RangeMultiplier(4)->Range(16, 4096)->Complexity();

}  // namespace
