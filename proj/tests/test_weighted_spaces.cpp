#include <cmath>
#include <random>

#include "degenlab/exact1d.hpp"
#include "degenlab/weighted_spaces.hpp"
#include "doctest.h"

using namespace degenlab;

namespace {

double unif(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

SampledFunction bump_carrier(const TestBump& bump, int n = 1025) {
  const LogGrid grid{bump.center - bump.width - 0.5,
                     bump.center + bump.width + 0.5, n};
  return SampledFunction::sample_s(grid,
                                   [&](double s) { return bump.value(s); });
}

}  // namespace

TEST_CASE("constant carrier norms match closed forms") {
  const LogGrid grid{0.0, 1.0, 257};
  const SampledFunction one(grid, std::vector<double>(257, 1.0));

  CHECK(lp_theta_norm(one, NormSpec{2.0, 2.0, 2.0}) ==
        doctest::Approx(std::sqrt((std::exp(2.0) - 1.0) / 2.0)).epsilon(1e-13));
  CHECK(lp_theta_norm(one, NormSpec{3.0, 0.0, 3.0}) ==
        doctest::Approx(1.0).epsilon(1e-13));
  CHECK(lp_theta_norm(one, NormSpec{2.0, 1.0, 2.0}) ==
        doctest::Approx(std::sqrt(std::exp(1.0) - 1.0)).epsilon(1e-13));
  CHECK(h1_theta_norm(one, NormSpec{2.0, 2.0, 2.0}) ==
        doctest::Approx(lp_theta_norm(one, NormSpec{2.0, 2.0, 2.0}))
            .epsilon(1e-13));
}

TEST_CASE("norms are absolutely homogeneous") {
  std::mt19937_64 rng(101);
  const LogGrid grid{-3.0, 3.0, 513};
  std::vector<double> values(513);
  for (auto& v : values) v = 2.0 * unif(rng) - 1.0;
  values.front() = values.back() = 0.0;
  const SampledFunction u(grid, values);
  std::vector<double> scaled_values = values;
  for (auto& v : scaled_values) v *= -3.5;
  const SampledFunction su(grid, scaled_values);

  for (const NormSpec spec : {NormSpec{2.0, 1.0, 2.0}, NormSpec{3.0, -2.0, 3.0}}) {
    CHECK(lp_theta_norm(su, spec) ==
          doctest::Approx(3.5 * lp_theta_norm(u, spec)).epsilon(1e-12));
    CHECK(h1_theta_norm(su, spec) ==
          doctest::Approx(3.5 * h1_theta_norm(u, spec)).epsilon(1e-12));
  }
}

TEST_CASE("gaussian profile norm converges to the analytic value") {
  const double exact = std::pow(std::sqrt(3.141592653589793 / 2.0), 0.5);
  double prev_err = 1.0;
  for (int n : {1025, 2049, 4097, 16385}) {
    const LogGrid grid{-8.0, 8.0, n};
    const SampledFunction u = SampledFunction::sample_s(
        grid, [](double s) { return std::exp(-s * s); });
    const double err =
        std::abs(lp_theta_norm(u, NormSpec{2.0, 0.0, 2.0}) - exact);
    CHECK(err < prev_err);
    prev_err = err;
  }
  CHECK(prev_err < 5e-7);
}

TEST_CASE("norm spec validation") {
  const LogGrid grid{0.0, 1.0, 17};
  const SampledFunction one(grid, std::vector<double>(17, 1.0));
  CHECK_THROWS_AS(lp_theta_norm(one, NormSpec{1.0, 0.0, 2.0}), Error);
  CHECK_THROWS_AS(lp_theta_norm(one, NormSpec{0.5, 0.0, 2.0}), Error);
}

TEST_CASE("hardy inequality: analytic case u = x e^{-x}") {
  const LogGrid grid{-30.0, 4.0, (1 << 20) + 1};
  const SampledFunction u = SampledFunction::sample(
      grid, [](double x) { return x * std::exp(-x); });
  const HardyReport rep = hardy_check(u, NormSpec{2.0, 1.0, 2.0});
  CHECK(rep.holds);
  CHECK(rep.lhs == doctest::Approx(1.0 / 16.0).epsilon(1e-8));
  CHECK(rep.rhs == doctest::Approx(1.0 / 4.0).epsilon(1e-8));
  CHECK(rep.slack == doctest::Approx(3.0 / 16.0).epsilon(1e-6));
}

TEST_CASE("hardy inequality holds for random bumps") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    TestBump bump;
    bump.center = 4.0 * unif(rng) - 2.0;
    bump.width = 0.5 + 1.5 * unif(rng);
    bump.amplitude = 0.5 + 1.5 * unif(rng);
    const SampledFunction u = bump_carrier(bump);
    for (double p : {2.0, 3.0}) {
      for (double theta : {-1.0, 1.0}) {
        CHECK(hardy_check(u, NormSpec{p, theta, p}).holds);
      }
    }
  }
}

TEST_CASE("hardy check rejects carriers touching the boundary") {
  const LogGrid grid{0.0, 1.0, 33};
  const SampledFunction one(grid, std::vector<double>(33, 1.0));
  CHECK_THROWS_AS(hardy_check(one, NormSpec{2.0, 1.0, 2.0}), Error);
}

TEST_CASE("cutoff family covers the line with the tuned margin") {
  for (double p : {2.0, 3.0}) {
    const CutoffFamily cut = build_cutoff(p);
    CHECK(cut.margin == doctest::Approx(0.1).epsilon(1e-6));
    CHECK(cutoff_cover_min(cut) == doctest::Approx(1.1).epsilon(1e-6));
    CHECK(cut.zeta_s(0.0) > 0.0);
    CHECK(cut.zeta_s(cut.width) == 0.0);
    CHECK(cut.zeta(std::exp(0.5 * cut.width)) == cut.zeta_s(0.5 * cut.width));
  }
}

TEST_CASE("dyadic norm is equivalent to the direct norm") {
  TestBump bump;
  bump.center = 0.5;
  bump.width = 1.5;
  const SampledFunction u = bump_carrier(bump, 2049);
  const CutoffFamily cut = build_cutoff(2.0);
  for (double theta : {-2.0, 0.0, 2.0}) {
    const NormSpec spec{2.0, theta, 2.0};
    const double direct = h1_theta_norm(u, spec);
    const double shifted = dyadic_norm(u, spec, cut);
    CHECK(shifted / direct > 0.05);
    CHECK(shifted / direct < 20.0);
  }
}

TEST_CASE("dyadic norm rejects supports outside the shift range") {
  const LogGrid grid{70.0, 74.0, 129};
  const SampledFunction u = SampledFunction::sample_s(
      grid, [](double s) { return std::exp(-(s - 72.0) * (s - 72.0)); });
  const CutoffFamily cut = build_cutoff(2.0);
  CHECK_THROWS_AS(dyadic_norm(u, NormSpec{2.0, 0.0, 2.0}, cut), Error);
}

TEST_CASE("time weights evaluate and integrate in closed form") {
  const TimeWeight one;
  CHECK(one(3.0) == 1.0);
  CHECK(weight_integral(one, -1.0, 2.0) == doctest::Approx(3.0).epsilon(1e-15));

  const TimeWeight half = power_time_weight(0.5);
  CHECK(half(-4.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(weight_integral(half, 0.0, 1.0) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(weight_integral(half, -1.0, 1.0) ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-14));

  CHECK_THROWS_AS(power_time_weight(-1.5), Error);
  CHECK_THROWS_AS(power_time_weight(-1.0), Error);
}

TEST_CASE("muckenhoupt estimate: constant weight is exactly one") {
  const TimeWeight one;
  CHECK(ap_constant_estimate(one, 2.0, 256) == 1.0);
  CHECK(ap_constant_estimate(one, 3.0, 1024) == 1.0);
}

TEST_CASE("muckenhoupt estimate: |t|^{1/2} at p = 2 is stable") {
  const TimeWeight w = power_time_weight(0.5);
  const double est256 = ap_constant_estimate(w, 2.0, 256);
  const double est1024 = ap_constant_estimate(w, 2.0, 1024);
  const double est4096 = ap_constant_estimate(w, 2.0, 4096);
  CHECK(est256 <= est1024);
  CHECK(est1024 <= est4096);
  CHECK(est1024 == doctest::Approx(1.4998319455172848).epsilon(1e-12));
  CHECK((est4096 - est1024) / est1024 < 0.02);
}

TEST_CASE("muckenhoupt estimate: |t|^2 at p = 2 diverges with resolution") {
  const TimeWeight w = power_time_weight(2.0);
  const double coarse = ap_constant_estimate(w, 2.0, 256);
  const double fine = ap_constant_estimate(w, 2.0, 4096);
  CHECK(fine > 10.0 * coarse);
}

TEST_CASE("muckenhoupt estimate validates its inputs") {
  CHECK_THROWS_AS(ap_constant_estimate(TimeWeight{}, 2.0, 8), Error);
  CHECK_THROWS_AS(ap_constant_estimate(TimeWeight{}, 1.0, 256), Error);
}
