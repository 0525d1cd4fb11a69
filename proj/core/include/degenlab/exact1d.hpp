#pragma once

#include <functional>

#include "degenlab/grid.hpp"
#include "degenlab/piecewise.hpp"

namespace degenlab {

/// Ratios of the lower-order coefficients to the leading one:
/// b = n_b * a, bhat = n_bhat * a, c = n_c * a.
struct LowerOrderRatios {
  double n_b = 0.0;
  double n_bhat = 0.0;
  double n_c = 0.0;
};

/// Roots alpha < beta of z^2 + (1 + n_b + n_bhat) z - n_c = 0; the
/// homogeneous solutions of the degenerate operator are x^{-alpha}, x^{-beta}.
struct IndicialRoots {
  double alpha = 0.0;
  double beta = 0.0;
};

/// Solve the characteristic quadratic with a cancellation-stable formula.
/// Throws DegenerateRoots when the discriminant is <= 1e-10.
IndicialRoots indicial_roots(const LowerOrderRatios& ratios);

/// The admissible weight-exponent geometry for a root pair at exponent p:
/// interior window (alpha*p, beta*p), two exterior rays, and the two
/// forbidden endpoints.
struct ThetaWindow {
  double lo = 0.0;  ///< alpha * p
  double hi = 0.0;  ///< beta * p
};

enum class ThetaRegime { BelowWindow, Interior, AboveWindow, Forbidden };

ThetaWindow admissible_theta(const IndicialRoots& roots, double p);
ThetaRegime classify_theta(const ThetaWindow& window, double theta,
                           double tol = 1e-8);

/// Constant-ratio degenerate problem on (0, inf):
///   -x^2 (a u')' + x b u' + x (bhat u)' + c u + lambda u = F' + f
/// with (b, bhat, c) = a * ratios and closed-form data F, f.
struct EulerProblem {
  double a = 1.0;
  LowerOrderRatios ratios;
  PowerPiecewise F;
  PowerPiecewise f;
  double lambda = 0.0;
};

/// Substitute v = x^gamma u: returns the problem solved by v, with ratios
/// (n_b + gamma, n_bhat + gamma, n_c - gamma(gamma+1) - gamma(n_b + n_bhat))
/// and data (x^gamma F, x^gamma f - gamma x^{gamma-1} F).
EulerProblem gauge_shift(const EulerProblem& problem, double gamma);

/// The gamma for which the shifted parameters satisfy the symmetry
/// normalization theta + 1 + n_b - (p-1) n_bhat = 0.
double normalizing_gamma(double p, double theta, const LowerOrderRatios& ratios);

/// Closed-form solution of the constant-ratio problem (lambda = 0):
///   u(x) = (A1(x) + B1) x^{-alpha} + (A2(x) + B2) x^{-beta},
/// where A1, A2 are exact weighted integrals of the data and the constants
/// B1, B2 are fixed by membership in the weighted space: both zero below the
/// window, B1 = -A1(inf) inside, B1 = -A1(inf) and B2 = -A2(inf) above.
class ExactEulerSolution {
 public:
  ExactEulerSolution(const EulerProblem& problem, double p, double theta);

  double operator()(double x) const;    ///< u(x)
  double x_derivative(double x) const;  ///< x u'(x)

  double A1(double x) const;
  double A2(double x) const;
  double A1_infinity() const { return a1_inf_; }
  double A2_infinity() const { return a2_inf_; }
  double B1() const { return b1_; }
  double B2() const { return b2_; }
  const IndicialRoots& roots() const { return roots_; }
  ThetaRegime regime() const { return regime_; }
  double p() const { return p_; }
  double theta() const { return theta_; }

  /// || u ||_{L_{p,theta}}: exact power tails, Gauss-Legendre across the data
  /// support with sign-crossing splits.
  double solution_norm() const;
  /// || x u' ||_{L_{p,theta}} by the same scheme.
  double x_derivative_norm() const;

  SampledFunction sample(const LogGrid& grid,
                         Interp interp = Interp::PiecewiseLinear) const;

 private:
  double norm_of(const std::function<double(double)>& value_at_s, double c1_left,
                 double c2_left, double c1_right, double c2_right) const;

  EulerProblem problem_;
  double p_ = 2.0;
  double theta_ = 0.0;
  IndicialRoots roots_;
  ThetaRegime regime_ = ThetaRegime::Interior;
  PowerPiecewise g1_, g2_;  // integrands of A1, A2
  double a1_inf_ = 0.0, a2_inf_ = 0.0;
  double b1_ = 0.0, b2_ = 0.0;
};

/// Sample the closed-form solution on a grid. Requires lambda = 0 and theta
/// off the forbidden endpoints (ForbiddenExponent otherwise).
SampledFunction euler_solve_exact(const EulerProblem& problem, double p,
                                  double theta, const LogGrid& grid);

/// Smooth compactly supported test profile in s used by the weak-form checks.
struct TestBump {
  double center = 0.0;
  double width = 1.0;
  double amplitude = 1.0;

  double value(double s) const;
  double deriv(double s) const;
};

/// Weak-form pairing residual |B(u, phi) - rhs(phi)| for phi(x) given by a
/// TestBump in s. Uses exact solution values and derivatives under composite
/// Gauss-Legendre split at the data breakpoints.
double weak_residual(const EulerProblem& problem, const ExactEulerSolution& u,
                     const TestBump& phi);

/// Lognormal market parameters for the terminal-value benchmark.
struct MarketParams {
  double sigma = 0.2;    ///< volatility, > 0
  double r = 0.0;        ///< short rate
  double horizon = 1.0;  ///< time to expiry, > 0
};

enum class PayoffKind { Call, Put, Constant, Asset, Indicator };

struct Payoff {
  PayoffKind kind = PayoffKind::Call;
  double strike = 1.0;  ///< for Call/Put
  double lo = 0.0;      ///< for Indicator
  double hi = 0.0;

  double operator()(double y) const;
};

/// Transition density of the lognormal model:
/// p(x, y) dy is the law of the terminal state started from x.
/// Requires x, y > 0 (DomainError).
double bs_density(double x, double y, const MarketParams& params);

/// Discounted expectation e^{-r h} E[payoff] by adaptive quadrature in
/// t = log y over mean +- 12 stddev (tail mass < 1e-30), split at payoff
/// kinks. Throws QuadratureError if the doubling scheme does not settle.
double bs_solve(const MarketParams& params, const Payoff& payoff, double x);

/// Closed-form call/put values (normal CDF via erfc) for cross-checking.
double bs_closed_form(const MarketParams& params, const Payoff& payoff, double x);

}  // namespace degenlab
