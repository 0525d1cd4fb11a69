#include <cmath>

#include "degenlab/verifier.hpp"
#include "doctest.h"

using namespace degenlab;

namespace {

EulerProblem canonical_problem() {
  EulerProblem problem;
  problem.ratios = {0.0, 0.0, 2.0};
  problem.f = PowerPiecewise::indicator(1.0, 2.0);
  return problem;
}

}  // namespace

TEST_CASE("default estimate grid pads the data support") {
  const EulerProblem problem = canonical_problem();
  const LogGrid grid = default_estimate_grid(problem);
  CHECK(grid.n == 4097);
  CHECK(grid.s_min == doctest::Approx(-20.0).epsilon(1e-12));
  CHECK(grid.s_max == doctest::Approx(std::log(2.0) + 20.0).epsilon(1e-12));

  const LogGrid empty = default_estimate_grid(EulerProblem{});
  CHECK(empty.s_min == doctest::Approx(-20.0));
  CHECK(empty.s_max == doctest::Approx(20.0));
}

TEST_CASE("exact and finite-difference estimates agree") {
  const EulerProblem problem = canonical_problem();
  const EstimateReport exact =
      estimate_ratio_elliptic(problem, 2.0, 0.0, 0.0, SolverKind::Exact);
  const EstimateReport fd = estimate_ratio_elliptic(problem, 2.0, 0.0, 0.0,
                                                    SolverKind::FiniteDifference);
  CHECK(exact.solver == "exact");
  CHECK(fd.solver == "fd");
  CHECK(exact.ratio > 0.0);
  CHECK(fd.ratio == doctest::Approx(exact.ratio).epsilon(1e-3));
  CHECK(fd.data_F_norm == doctest::Approx(exact.data_F_norm).epsilon(1e-12));
  CHECK(fd.data_f_norm == doctest::Approx(exact.data_f_norm).epsilon(1e-12));
  CHECK_FALSE(exact.window_violation);
  CHECK_FALSE(fd.window_violation);
}

TEST_CASE("lambda damping is absorbed consistently by the exact path") {
  const EulerProblem problem = canonical_problem();
  const EstimateReport rep =
      estimate_ratio_elliptic(problem, 2.0, 0.0, 9.0, SolverKind::Exact);
  CHECK(rep.lambda == doctest::Approx(9.0));
  CHECK(rep.lhs == doctest::Approx(4.0 * rep.u_norm + rep.xdu_norm).epsilon(1e-13));
  CHECK(rep.rhs ==
        doctest::Approx(rep.data_F_norm + rep.data_f_norm / 4.0).epsilon(1e-13));
  CHECK(rep.ratio > 0.0);
  CHECK(std::isfinite(rep.ratio));
}

TEST_CASE("theta sweep flags exactly the two window endpoints") {
  const EulerProblem problem = canonical_problem();
  const SweepResult sweep = theta_sweep(problem, 2.0, 7);

  CHECK(sweep.window_lo == doctest::Approx(-4.0));
  CHECK(sweep.window_hi == doctest::Approx(2.0));
  CHECK(sweep.mid_ratio > 0.0);

  REQUIRE(sweep.blowup_flags.size() == 2);
  CHECK(sweep.blowup_flags.front() == doctest::Approx(-4.0));
  CHECK(sweep.blowup_flags.back() == doctest::Approx(2.0));

  for (const SweepRow& row : sweep.rows) {
    if (!row.probe) CHECK_FALSE(row.flagged);
    if (row.flagged) CHECK(row.probe);
    CHECK(std::isfinite(row.report.ratio));
  }
}

TEST_CASE("lambda sweep reports a stabilization point") {
  const EulerProblem problem = canonical_problem();
  const SweepResult sweep = lambda_sweep(problem, 2.0, 0.0);

  REQUIRE(sweep.rows.size() == 8);
  CHECK(sweep.rows.front().key == 0.0);
  CHECK(sweep.rows.back().key == 4096.0);
  for (const SweepRow& row : sweep.rows) {
    CHECK(std::isfinite(row.report.ratio));
    CHECK(row.report.ratio > 0.0);
    CHECK_FALSE(row.report.window_violation);
  }
  CHECK(sweep.lambda_star > 0.0);
  CHECK(sweep.lambda_star <= 4096.0);
}

TEST_CASE("scaling invariance holds for both solver paths") {
  const EulerProblem problem = canonical_problem();
  const std::vector<double> factors{std::exp(1.0), std::exp(2.0)};

  const InvarianceReport exact = scaling_invariance_check(
      problem, 2.0, 0.0, factors, SolverKind::Exact);
  CHECK(exact.passed);
  CHECK(exact.max_deviation < 1e-8);
  REQUIRE(exact.rows.size() == 2);
  for (const InvarianceRow& row : exact.rows) {
    CHECK(row.passed);
    CHECK(row.ratio_transformed ==
          doctest::Approx(row.ratio_base).epsilon(1e-8));
  }

  const InvarianceReport fd = scaling_invariance_check(
      problem, 2.0, 0.0, factors, SolverKind::FiniteDifference);
  CHECK(fd.passed);
}

TEST_CASE("gauge invariance holds for both solver paths") {
  const EulerProblem problem = canonical_problem();
  const std::vector<double> gammas{-1.0, 0.5, 2.0};

  const InvarianceReport exact =
      gauge_invariance_check(problem, 2.0, 0.0, gammas, SolverKind::Exact);
  CHECK(exact.passed);
  CHECK(exact.max_deviation < 1e-8);

  const InvarianceReport fd = gauge_invariance_check(
      problem, 2.0, 0.0, gammas, SolverKind::FiniteDifference);
  CHECK(fd.passed);
  for (const InvarianceRow& row : fd.rows) CHECK(row.passed);
}

TEST_CASE("parabolic estimate carries the space-time norms") {
  const EulerProblem problem = canonical_problem();
  RoughCoefficients coeffs;
  GridData data;
  data.F = problem.F;
  data.f = problem.f;
  const EstimateReport rep = estimate_ratio_parabolic(
      coeffs, problem.ratios, 0.0, data, [](double) { return 1.0; },
      LogGrid{-10.0, 10.0, 257}, TimeGrid{1.0, 32}, 2.0, 0.0,
      TimeScheme::CrankNicolson);
  CHECK(rep.solver == "fd-parabolic");
  CHECK(rep.ratio > 0.0);
  CHECK(rep.ratio < 10.0);
  CHECK(rep.u_norm > 0.0);
  CHECK(rep.xdu_norm > 0.0);
  CHECK(rep.data_f_norm > 0.0);
  CHECK_FALSE(rep.window_violation);
}
