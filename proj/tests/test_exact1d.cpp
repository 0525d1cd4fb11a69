#include <cmath>
#include <random>

#include "degenlab/exact1d.hpp"
#include "degenlab/quadrature.hpp"
#include "doctest.h"

using namespace degenlab;

namespace {

double unif(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

EulerProblem unit_source_problem(const LowerOrderRatios& ratios) {
  EulerProblem problem;
  problem.ratios = ratios;
  problem.f = PowerPiecewise::indicator(1.0, 2.0);
  return problem;
}

}  // namespace

TEST_CASE("indicial roots satisfy the characteristic identities") {
  std::mt19937_64 rng(2024);
  int accepted = 0;
  while (accepted < 1000) {
    LowerOrderRatios ratios{6.0 * unif(rng) - 3.0, 6.0 * unif(rng) - 3.0,
                            6.0 * unif(rng) - 3.0};
    const double B = 1.0 + ratios.n_b + ratios.n_bhat;
    if (B * B + 4.0 * ratios.n_c <= 1e-6) continue;
    const IndicialRoots roots = indicial_roots(ratios);
    ++accepted;
    CHECK(roots.alpha < roots.beta);
    CHECK(roots.alpha + roots.beta == doctest::Approx(-B).epsilon(1e-10));
    CHECK(roots.alpha * roots.beta ==
          doctest::Approx(-ratios.n_c).epsilon(1e-10).scale(1.0));
  }
}

TEST_CASE("indicial roots: pinned pairs") {
  const IndicialRoots r1 = indicial_roots({0.0, 0.0, 0.0});
  CHECK(r1.alpha == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(r1.beta == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));

  const IndicialRoots r2 = indicial_roots({0.0, 0.0, 2.0});
  CHECK(r2.alpha == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(r2.beta == doctest::Approx(1.0).epsilon(1e-14));

  CHECK_THROWS_AS(indicial_roots({0.0, 0.0, -0.25}), Error);
}

TEST_CASE("theta window classification") {
  const ThetaWindow window = admissible_theta(indicial_roots({0.0, 0.0, 2.0}), 3.0);
  CHECK(window.lo == doctest::Approx(-6.0));
  CHECK(window.hi == doctest::Approx(3.0));
  CHECK(classify_theta(window, 0.0) == ThetaRegime::Interior);
  CHECK(classify_theta(window, -7.0) == ThetaRegime::BelowWindow);
  CHECK(classify_theta(window, 4.0) == ThetaRegime::AboveWindow);
  CHECK(classify_theta(window, -6.0 + 1e-9) == ThetaRegime::Forbidden);
  CHECK(classify_theta(window, 3.0 - 1e-9) == ThetaRegime::Forbidden);
}

TEST_CASE("normalizing gamma satisfies its defining identity") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const LowerOrderRatios ratios{4.0 * unif(rng) - 2.0, 4.0 * unif(rng) - 2.0,
                                  4.0 * unif(rng) - 2.0};
    const double p = 1.5 + 3.0 * unif(rng);
    const double theta = 6.0 * unif(rng) - 3.0;
    const double gamma = normalizing_gamma(p, theta, ratios);
    EulerProblem problem;
    problem.ratios = ratios;
    const EulerProblem shifted = gauge_shift(problem, gamma);
    const double rebalanced = (theta - gamma * p) + 1.0 + shifted.ratios.n_b -
                              (p - 1.0) * shifted.ratios.n_bhat;
    CHECK(rebalanced == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
  }
  CHECK(normalizing_gamma(2.0, 1.0, {0.0, 0.0, 0.0}) == doctest::Approx(1.0));
}

TEST_CASE("source-only solution, roots (-1, 0): three regimes in closed form") {
  const EulerProblem problem = unit_source_problem({0.0, 0.0, 0.0});

  SUBCASE("below the window") {
    const ExactEulerSolution u(problem, 2.0, -3.0);
    CHECK(u.regime() == ThetaRegime::BelowWindow);
    CHECK(u.B1() == 0.0);
    CHECK(u.B2() == 0.0);
    CHECK(u(0.5) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(u(1.5) == doctest::Approx(1.0 - 1.5 + std::log(1.5)).epsilon(1e-12));
    CHECK(u(2.0) == doctest::Approx(std::log(2.0) - 1.0).epsilon(1e-10));
    CHECK(u(4.0) == doctest::Approx(-2.0 + std::log(2.0)).epsilon(1e-12));
    CHECK(u.solution_norm() > 0.0);
  }

  SUBCASE("inside the window") {
    const ExactEulerSolution u(problem, 2.0, -1.0);
    CHECK(u.regime() == ThetaRegime::Interior);
    CHECK(u.B1() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(u.B2() == 0.0);
    CHECK(u(0.25) == doctest::Approx(0.125).epsilon(1e-13));
    CHECK(u(1.5) ==
          doctest::Approx(1.0 - 0.75 + std::log(1.5)).epsilon(1e-12));
    CHECK(u(3.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(u(50.0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  }

  SUBCASE("above the window") {
    const ExactEulerSolution u(problem, 2.0, 1.0);
    CHECK(u.regime() == ThetaRegime::AboveWindow);
    CHECK(u.B1() == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(u.B2() == doctest::Approx(-std::log(2.0)).epsilon(1e-14));
    for (double x : {2.0, 3.0, 10.0, 100.0}) {
      CHECK(std::abs(u(x)) < 1e-10);
    }
    CHECK(u(0.5) == doctest::Approx(0.25 - std::log(2.0)).epsilon(1e-12));
  }
}

TEST_CASE("divergence-data solution, roots (-1, 0): closed form") {
  EulerProblem problem;
  problem.ratios = {0.0, 0.0, 0.0};
  problem.F = PowerPiecewise::indicator(1.0, 2.0);

  const ExactEulerSolution u(problem, 2.0, -3.0);
  CHECK(u.A1(2.0) == doctest::Approx(-0.75).epsilon(1e-13));
  CHECK(u.A1(10.0) == doctest::Approx(-0.75).epsilon(1e-13));
  CHECK(u.A2(2.0) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(u(0.5) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(u(1.5) == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(u(3.0) == doctest::Approx(-0.75 * 3.0 + 0.5).epsilon(1e-12));
  CHECK(u.x_derivative(1.5) == doctest::Approx(-1.5).epsilon(1e-12));
}

TEST_CASE("exact solution rejects unsupported configurations") {
  EulerProblem problem = unit_source_problem({0.0, 0.0, 2.0});
  CHECK_THROWS_AS(ExactEulerSolution(problem, 2.0, -4.0), Error);  // endpoint
  problem.lambda = 1.0;
  CHECK_THROWS_AS(ExactEulerSolution(problem, 2.0, 0.0), Error);
  problem.lambda = 0.0;
  problem.a = -1.0;
  CHECK_THROWS_AS(ExactEulerSolution(problem, 2.0, 0.0), Error);
}

TEST_CASE("weak-form residual vanishes against random test bumps") {
  std::mt19937_64 rng(31);

  EulerProblem problem = unit_source_problem({0.0, 0.0, 2.0});
  problem.F = PowerPiecewise::power(0.5, 1.5, 2.0, 1.0);
  const ExactEulerSolution u(problem, 2.0, 0.0);

  for (int trial = 0; trial < 20; ++trial) {
    TestBump phi;
    phi.center = 6.0 * unif(rng) - 3.0;
    phi.width = 0.5 + 1.5 * unif(rng);
    phi.amplitude = 0.5 + unif(rng);
    CHECK(weak_residual(problem, u, phi) < 1e-6);
  }
}

TEST_CASE("weak-form residual handles a unit root (alpha = 1)") {
  EulerProblem problem;
  problem.ratios = {-4.0, 0.0, -2.0};  // roots 1 and 2
  problem.F = PowerPiecewise::indicator(1.0, 2.0);
  const IndicialRoots roots = indicial_roots(problem.ratios);
  CHECK(roots.alpha == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(roots.beta == doctest::Approx(2.0).epsilon(1e-14));

  const ExactEulerSolution u(problem, 2.0, 3.0);
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    TestBump phi;
    phi.center = 4.0 * unif(rng) - 2.0;
    phi.width = 0.5 + unif(rng);
    CHECK(weak_residual(problem, u, phi) < 1e-6);
  }
}

TEST_CASE("gauge shift reproduces x^gamma times the base solution") {
  const EulerProblem problem = unit_source_problem({0.0, 0.0, 2.0});
  const double p = 2.0, theta = 0.0;
  const ExactEulerSolution base(problem, p, theta);
  for (double gamma : {-1.0, 0.5, 2.0}) {
    const EulerProblem shifted = gauge_shift(problem, gamma);
    const ExactEulerSolution moved(shifted, p, theta - gamma * p);
    for (double x : {0.3, 1.0, 1.7, 2.5, 8.0}) {
      CHECK(moved(x) ==
            doctest::Approx(std::pow(x, gamma) * base(x)).epsilon(1e-10));
    }
  }
}

TEST_CASE("piecewise power data: dilation and integrals") {
  const PowerPiecewise g = PowerPiecewise::indicator(1.0, 2.0);
  const PowerPiecewise h = g.dilated(2.0);
  CHECK(h.support_lo() == doctest::Approx(0.5));
  CHECK(h.support_hi() == doctest::Approx(1.0));
  CHECK(h(0.75) == doctest::Approx(1.0));
  CHECK(h(1.5) == 0.0);

  CHECK(g.integral_power_full(1.0) == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(g.integral_power_prefix(-1.0, 1.5) ==
        doctest::Approx(std::log(1.5)).epsilon(1e-14));
  const PowerPiecewise poly = PowerPiecewise::polynomial(0.0, 1.0, {0.0, 1.0});
  CHECK(poly.integral_power_full(0.0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("lognormal density is a probability martingale density") {
  const MarketParams market{0.2, 0.05, 1.0};
  const double x = 100.0;
  const double m = std::log(x) + (market.r - 0.5 * market.sigma * market.sigma);
  const double sd = market.sigma;
  const double lo = std::exp(m - 12.0 * sd), hi = std::exp(m + 12.0 * sd);

  const double mass = adaptive_integral(
      [&](double y) { return bs_density(x, y, market); }, lo, hi, 1e-12, 1e-14);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));

  const double mean = adaptive_integral(
      [&](double y) { return y * bs_density(x, y, market); }, lo, hi, 1e-12,
      1e-10);
  CHECK(mean == doctest::Approx(x * std::exp(market.r)).epsilon(1e-10));

  CHECK_THROWS_AS(bs_density(-1.0, 1.0, market), Error);
  CHECK_THROWS_AS(bs_density(1.0, 0.0, market), Error);
}

TEST_CASE("quadrature pricing matches the closed form") {
  const MarketParams market{0.2, 0.05, 1.0};
  Payoff payoff;
  payoff.strike = 100.0;

  for (double spot : {80.0, 100.0, 125.0}) {
    payoff.kind = PayoffKind::Call;
    const double call_q = bs_solve(market, payoff, spot);
    const double call_c = bs_closed_form(market, payoff, spot);
    CHECK(call_q == doctest::Approx(call_c).epsilon(1e-9));

    payoff.kind = PayoffKind::Put;
    const double put_q = bs_solve(market, payoff, spot);
    const double put_c = bs_closed_form(market, payoff, spot);
    CHECK(put_q == doctest::Approx(put_c).epsilon(1e-9));

    const double parity = call_c - put_c;
    CHECK(parity ==
          doctest::Approx(spot - 100.0 * std::exp(-market.r)).epsilon(1e-12));
  }

  payoff.kind = PayoffKind::Call;
  CHECK(bs_closed_form(market, payoff, 100.0) ==
        doctest::Approx(10.450583572185565).epsilon(1e-13));

  payoff.kind = PayoffKind::Constant;
  CHECK(bs_solve(market, payoff, 100.0) ==
        doctest::Approx(std::exp(-market.r)).epsilon(1e-10));

  payoff.kind = PayoffKind::Indicator;
  CHECK_THROWS_AS(bs_closed_form(market, payoff, 100.0), Error);
  CHECK_THROWS_AS(bs_solve({-0.2, 0.05, 1.0}, payoff, 100.0), Error);
}
