#include <benchmark/benchmark.h>

#include <cmath>

#include "degenlab/weighted_spaces.hpp"

namespace {

using namespace degenlab;

SampledFunction make_carrier(int n) {
  const LogGrid grid{-8.0, 8.0, n};
  return SampledFunction::sample_s(
      grid, [](double s) { return std::exp(-s * s); });
}

void BM_LpThetaNorm(benchmark::State& state) {
  const SampledFunction u = make_carrier(static_cast<int>(state.range(0)));
  const NormSpec spec{2.0, 0.5, 2.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(lp_theta_norm(u, spec));
  }
}
BENCHMARK(BM_LpThetaNorm)->Arg(1 << 10)->Arg(1 << 14)->Arg(1 << 18);

void BM_H1ThetaNorm(benchmark::State& state) {
  const SampledFunction u = make_carrier(static_cast<int>(state.range(0)));
  const NormSpec spec{2.0, 0.5, 2.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(h1_theta_norm(u, spec));
  }
}
BENCHMARK(BM_H1ThetaNorm)->Arg(1 << 10)->Arg(1 << 14);

void BM_DyadicNorm(benchmark::State& state) {
  const SampledFunction u = make_carrier(static_cast<int>(state.range(0)));
  const NormSpec spec{2.0, 0.5, 2.0};
  const CutoffFamily cut = build_cutoff(spec.p);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dyadic_norm(u, spec, cut));
  }
}
BENCHMARK(BM_DyadicNorm)->Arg(1 << 10)->Arg(1 << 12);

void BM_ApConstantEstimate(benchmark::State& state) {
  const TimeWeight w = power_time_weight(0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ap_constant_estimate(w, 2.0, state.range(0)));
  }
}
BENCHMARK(BM_ApConstantEstimate)->Arg(256)->Arg(1024)->Arg(4096);

}  // namespace

BENCHMARK_MAIN();
