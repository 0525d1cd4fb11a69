#include <benchmark/benchmark.h>

#include <random>

#include "degenlab/inkspots.hpp"

namespace {

using namespace degenlab;

IntervalSet random_set(int pieces, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto unif = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };
  std::vector<double> cuts(2 * static_cast<std::size_t>(pieces));
  for (auto& c : cuts) c = 10.0 * unif();
  std::sort(cuts.begin(), cuts.end());
  std::vector<std::pair<double, double>> ivs;
  for (int k = 0; k < pieces; ++k) {
    if (cuts[2 * k] < cuts[2 * k + 1]) {
      ivs.emplace_back(cuts[2 * k], cuts[2 * k + 1]);
    }
  }
  return IntervalSet::from_unsorted(std::move(ivs));
}

void BM_CriticalRadius(benchmark::State& state) {
  const IntervalSet E = random_set(static_cast<int>(state.range(0)), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(critical_radius(E, 5.0, 0.25));
  }
}
BENCHMARK(BM_CriticalRadius)->Arg(4)->Arg(16)->Arg(64);

void BM_SelectCover(benchmark::State& state) {
  const IntervalSet E = random_set(static_cast<int>(state.range(0)), 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(select_cover(E, 0.25));
  }
}
BENCHMARK(BM_SelectCover)->Arg(4)->Arg(16);

void BM_HypothesisCheck(benchmark::State& state) {
  const IntervalSet E = random_set(8, 13);
  const auto hull = E.hull();
  const double pad = E.length() / 0.25 + 1.0;
  const IntervalSet F({{hull.first - pad, hull.second + pad}});
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        hypothesis_check(E, F, 0.25, hull.second, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_HypothesisCheck)->Arg(64)->Arg(256);

void BM_MeasureComparison(benchmark::State& state) {
  const TimeWeight w = power_time_weight(0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        measure_comparison_check(w, 2.0, 1, static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_MeasureComparison)->Arg(50)->Arg(200);

}  // namespace
