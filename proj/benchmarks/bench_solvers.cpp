#include <benchmark/benchmark.h>

#include "degenlab/exact1d.hpp"
#include "degenlab/fdsolver.hpp"

namespace {

using namespace degenlab;

EulerProblem canonical_problem() {
  EulerProblem problem;
  problem.ratios = {0.0, 0.0, 2.0};
  problem.f = PowerPiecewise::indicator(1.0, 2.0);
  return problem;
}

void BM_ExactEulerSolve(benchmark::State& state) {
  const EulerProblem problem = canonical_problem();
  for (auto _ : state) {
    const ExactEulerSolution sol(problem, 2.0, 0.0);
    benchmark::DoNotOptimize(sol.solution_norm());
  }
}
BENCHMARK(BM_ExactEulerSolve);

void BM_EllipticSolveFd(benchmark::State& state) {
  const EulerProblem problem = canonical_problem();
  RoughCoefficients coeffs;
  GridData data;
  data.F = problem.F;
  data.f = problem.f;
  const LogGrid grid{-16.0, 16.0, static_cast<int>(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        elliptic_solve_fd(coeffs, problem.ratios, 0.0, data, grid, 2.0, 0.0));
  }
}
BENCHMARK(BM_EllipticSolveFd)->Arg(513)->Arg(2049)->Arg(8193);

void BM_ParabolicSolveFd(benchmark::State& state) {
  const EulerProblem problem = canonical_problem();
  RoughCoefficients coeffs;
  GridData data;
  data.F = problem.F;
  data.f = problem.f;
  const LogGrid grid{-16.0, 16.0, 513};
  const TimeGrid tg{1.0, static_cast<int>(state.range(0))};
  for (auto _ : state) {
    benchmark::DoNotOptimize(parabolic_solve_fd(
        coeffs, problem.ratios, 0.0, data, [](double) { return 1.0; }, grid, tg,
        2.0, 0.0, TimeScheme::CrankNicolson));
  }
}
BENCHMARK(BM_ParabolicSolveFd)->Arg(16)->Arg(64);

void BM_ThomasSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    state.PauseTiming();
    std::vector<double> sub(n, -1.0), diag(n, 4.0), super(n, -1.0), rhs(n, 1.0);
    state.ResumeTiming();
    solve_tridiagonal(sub, diag, super, rhs);
    benchmark::DoNotOptimize(rhs.data());
  }
}
BENCHMARK(BM_ThomasSolve)->Arg(1 << 12)->Arg(1 << 16);

}  // namespace
