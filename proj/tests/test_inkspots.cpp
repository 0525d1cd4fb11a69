#include <algorithm>
#include <cmath>

#include "degenlab/inkspots.hpp"
#include "doctest.h"

using namespace degenlab;

TEST_CASE("interval sets: construction and algebra") {
  CHECK_THROWS_AS(IntervalSet({{1.0, 0.5}}), Error);
  CHECK_THROWS_AS(IntervalSet({{0.0, 1.0}, {0.5, 2.0}}), Error);
  CHECK_THROWS_AS(IntervalSet({{2.0, 3.0}, {0.0, 1.0}}), Error);

  const IntervalSet merged =
      IntervalSet::from_unsorted({{0.5, 2.0}, {0.0, 1.0}, {3.0, 3.0}});
  REQUIRE(merged.intervals().size() == 1);
  CHECK(merged.length() == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(merged.hull().first == 0.0);
  CHECK(merged.hull().second == 2.0);

  const IntervalSet E({{0.0, 1.0}, {2.0, 4.0}});
  CHECK(E.length() == doctest::Approx(3.0));
  CHECK(E.intersect_length(0.5, 2.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(E.intersect(0.5, 3.0).length() == doctest::Approx(1.5).epsilon(1e-15));

  const IntervalSet diff = E.setminus(IntervalSet({{0.25, 2.5}}));
  CHECK(diff.length() == doctest::Approx(1.75).epsilon(1e-15));
  const IntervalSet uni = E.unite(IntervalSet({{0.5, 2.5}}));
  CHECK(uni.length() == doctest::Approx(4.0).epsilon(1e-15));

  CHECK(E.weighted_length(power_time_weight(0.5)) ==
        doctest::Approx(2.0 / 3.0 + (2.0 / 3.0) * (8.0 - std::sqrt(8.0)))
            .epsilon(1e-13));
}

TEST_CASE("density of an interval set in a cylinder") {
  const IntervalSet E({{0.0, 1.0}});
  CHECK(density(E, 0.5, 0.25) == doctest::Approx(1.0));
  CHECK(density(E, 0.5, 1.0) == doctest::Approx(0.5));
  CHECK(density(E, 0.5, 10.0) == doctest::Approx(0.05));
  CHECK(density(E, 5.0, 0.5) == doctest::Approx(0.0).scale(1.0));
  CHECK_THROWS_AS(density(E, 0.5, 0.0), Error);
}

TEST_CASE("critical radius: exact values") {
  const IntervalSet E({{0.0, 1.0}});
  CHECK(critical_radius(E, 0.5, 0.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(critical_radius(E, 0.5, 0.1) == doctest::Approx(5.0).epsilon(1e-14));
  CHECK(density(E, 0.5, critical_radius(E, 0.5, 0.25)) ==
        doctest::Approx(0.25).epsilon(1e-13));

  const IntervalSet two({{0.0, 1.0}, {3.0, 4.0}});
  const double r = critical_radius(two, 2.0, 0.4);
  CHECK(density(two, 2.0, r) == doctest::Approx(0.4).epsilon(1e-13));

  CHECK_THROWS_AS(critical_radius(IntervalSet{}, 0.0, 0.5), Error);
  CHECK_THROWS_AS(critical_radius(E, 0.5, 0.0), Error);
  CHECK_THROWS_AS(critical_radius(E, 0.5, 1.0), Error);
}

TEST_CASE("cover selection: disjoint cylinders at exact density") {
  const IntervalSet E({{0.0, 1.0}, {2.0, 3.0}});
  const double gamma = 0.25;
  const CoverSelection sel = select_cover(E, gamma);

  CHECK(sel.residual <= 1e-6 * E.length());
  REQUIRE_FALSE(sel.cylinders.empty());

  auto sorted = sel.cylinders;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    CHECK(density(E, sorted[k].first, sorted[k].second) ==
          doctest::Approx(gamma).epsilon(1e-9));
    if (k > 0) {
      CHECK(sorted[k - 1].first + sorted[k - 1].second <=
            sorted[k].first - sorted[k].second + 1e-12);
    }
  }
}

TEST_CASE("hypothesis check: containing configuration passes") {
  const IntervalSet E({{0.0, 1.0}});
  const IntervalSet F({{-1.0, 2.0}});
  const HypothesisResult res = hypothesis_check(E, F, 0.5, 1.0);
  CHECK(res.holds);
  CHECK_FALSE(res.has_witness);
}

TEST_CASE("hypothesis check: boundary counterexample with pinned witness") {
  const IntervalSet E({{0.0, 1.0}});
  const HypothesisResult res = hypothesis_check(E, E, 0.5, 0.0);
  CHECK_FALSE(res.holds);
  REQUIRE(res.has_witness);
  CHECK(res.t == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(res.R == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("ink-spots bound holds for admissible weights") {
  const IntervalSet E({{0.0, 0.25}, {0.5, 0.75}});
  const double gamma = 0.3;
  const auto hull = E.hull();
  const double pad = E.length() / gamma + 1.0;
  const IntervalSet F({{hull.first - pad, hull.second + pad}});

  const LemmaReport flat =
      ink_spots_bound(E, F, gamma, TimeWeight{}, 2.0, hull.second);
  CHECK(flat.hypothesis_holds);
  CHECK(flat.conclusion_holds);
  CHECK(flat.delta == doctest::Approx(1.0));
  CHECK(flat.ap_constant == doctest::Approx(1.0));
  CHECK(flat.wE == doctest::Approx(0.5).epsilon(1e-14));

  const LemmaReport rough =
      ink_spots_bound(E, F, gamma, power_time_weight(0.5), 2.0, hull.second);
  CHECK(rough.hypothesis_holds);
  CHECK(rough.conclusion_holds);
  CHECK(rough.delta > 0.0);
  CHECK(rough.delta <= 1.0);
  CHECK(rough.bound_rhs > rough.wE);

  const IntervalSet bad({{0.0, 1.0}});
  CHECK_THROWS_AS(ink_spots_bound(bad, bad, 0.5, TimeWeight{}, 2.0, 0.0), Error);
}

TEST_CASE("doubling check distinguishes members from non-members") {
  const DoublingReport flat = doubling_check(TimeWeight{}, 2.0);
  CHECK(flat.applicable);
  CHECK(flat.holds);
  CHECK(flat.worst_ratio <= 1.0 + 1e-9);

  const DoublingReport rough = doubling_check(power_time_weight(0.5), 2.0);
  CHECK(rough.applicable);
  CHECK(rough.holds);

  const DoublingReport outside = doubling_check(power_time_weight(2.0), 2.0);
  CHECK_FALSE(outside.applicable);
}

TEST_CASE("measure comparison: calibrated two-sided bounds verify") {
  const MeasureComparisonReport flat = measure_comparison_check(TimeWeight{}, 2.0);
  CHECK(flat.holds);
  CHECK(flat.N == doctest::Approx(1.0));
  CHECK(flat.delta == doctest::Approx(1.0));

  const TimeWeight w = power_time_weight(0.5);
  const MeasureComparisonReport a = measure_comparison_check(w, 2.0, 5);
  CHECK(a.holds);
  CHECK(a.N >= 1.0);
  CHECK(a.delta > 0.0);
  CHECK(a.delta <= 1.0);

  const MeasureComparisonReport b = measure_comparison_check(w, 2.0, 5);
  CHECK(b.worst_upper == a.worst_upper);
  CHECK(b.worst_lower == a.worst_lower);

  const MeasureComparisonReport c = measure_comparison_check(w, 2.0, 99);
  CHECK(c.holds);
}
