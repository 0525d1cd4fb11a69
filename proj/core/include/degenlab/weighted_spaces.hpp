#pragma once

#include <cstdint>

#include "degenlab/grid.hpp"
#include "degenlab/piecewise.hpp"

namespace degenlab {

/// Parameters of the weighted norms: integrability exponent p > 1, weight
/// exponent theta (weight x^{theta-1} dx), and a time exponent q > 1 for the
/// parabolic variants (q = p throughout the solvers).
struct NormSpec {
  double p = 2.0;
  double theta = 0.0;
  double q = 2.0;

  void validate() const;
};

/// ( integral |u|^p x^{theta-1} dx )^{1/p} over the grid range.
///
/// Piecewise-constant carriers integrate in closed form; piecewise-linear
/// carriers use per-cell Gauss-Legendre against the weight e^{theta*s}.
double lp_theta_norm(const SampledFunction& u, const NormSpec& spec);

/// ( ||u||^p + ||x u'||^p )^{1/p} with the discrete log-derivative.
double h1_theta_norm(const SampledFunction& u, const NormSpec& spec);

/// ( integral |x^{mu} g|^p x^{theta-1} dx )^{1/p} for closed-form data g.
double lp_theta_norm(const PowerPiecewise& g, double p, double theta, double mu = 0.0);

/// Smooth multiplicative cutoff family: zeta(x) = amplitude * std bump of
/// log(x)/width, tuned so the shifted p-th powers sum to at least 1 + margin.
struct CutoffFamily {
  double width = 1.5;      ///< half-width of the bump in s = log x
  double amplitude = 1.0;  ///< scale applied to exp(-1/(1-t^2))
  double p = 2.0;          ///< exponent the overlap was tuned for
  double margin = 0.0;     ///< achieved min of (sum over shifts) - 1
  int shift_lo = -64;      ///< integer shift range used by dyadic_norm
  int shift_hi = 64;

  double zeta(double x) const;
  double zeta_s(double s) const;        ///< profile in s
  double zeta_s_deriv(double s) const;  ///< d/ds of the profile
};

/// Tune the amplitude so min_s sum_n zeta^p(e^{s-n}) = 1.1 (margin 0.1).
CutoffFamily build_cutoff(double p);

/// Minimum over a fine s-grid of sum_n zeta^p(e^{s-n}).
double cutoff_cover_min(const CutoffFamily& cut, int check_points = 10000);

/// Shift-decomposed equivalent norm:
/// ( sum_m e^{m*theta} || u(e^m .) zeta ||_{W^1_p}^p )^{1/p}.
/// Throws CoverageError if the family's shift range cannot cover the support.
double dyadic_norm(const SampledFunction& u, const NormSpec& spec,
                   const CutoffFamily& cut);

/// Weighted Hardy inequality check:
/// (theta^2/p^2) * integral |u|^p x^{theta-1} dx  vs
/// integral |u|^{p-2} (u')^2 x^{theta+1} dx, matching quadrature on both sides.
struct HardyReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  ///< rhs - lhs
  bool holds = false;  ///< lhs <= rhs * (1 + tol)
};

/// Requires the carrier to vanish at the first/last grid node (SupportError).
/// For p < 2 the factor |u|^{p-2} is floored at |u| = 1e-30.
HardyReport hardy_check(const SampledFunction& u, const NormSpec& spec,
                        double tol = 1e-8);

/// Weights on the time axis: constant one or |t|^a with a > -1.
enum class TimeWeightKind { ConstantOne, Power };

struct TimeWeight {
  TimeWeightKind kind = TimeWeightKind::ConstantOne;
  double a = 0.0;  ///< exponent of |t|^a when kind == Power

  double operator()(double t) const;
};

/// |t|^a weight; requires a > -1 (local integrability).
TimeWeight power_time_weight(double a);

/// Exact integral of the weight over [t0, t1].
double weight_integral(const TimeWeight& w, double t0, double t1);

/// Scan-maximum estimate of the Muckenhoupt constant
///   sup_I (avg_I w) (avg_I w^{1/(1-p)})^{p-1}
/// over a nested family of intervals (dyadic lengths; endpoint-at-zero,
/// geometrically offset, and straddling placements). Exact closed-form
/// averages; candidates with a divergent dual average are skipped. The
/// estimate is monotone nondecreasing in `resolution` (nested families) and
/// equals exactly 1 for the constant weight. Requires resolution >= 16.
double ap_constant_estimate(const TimeWeight& w, double p, long resolution);

}  // namespace degenlab
