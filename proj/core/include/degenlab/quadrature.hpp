#pragma once

#include <functional>

namespace degenlab {

/// Composite Gauss-Legendre rule (6 points per cell).
double gauss_legendre(const std::function<double(double)>& f, double a, double b,
                      int cells);

/// Like gauss_legendre, but splits any cell on which `sign` changes sign at a
/// bisected root first. Intended for integrands |g|^p with g continuous.
double gauss_legendre_signsplit(const std::function<double(double)>& f,
                                const std::function<double(double)>& sign,
                                double a, double b, int cells);

/// Exact value of the integral of e^{kappa*s} * (A + B*s) over [s0, s1].
/// Stable as kappa -> 0.
double exp_linear_integral(double kappa, double s0, double s1, double A, double B);

/// Exact value of the integral of e^{kappa*s} over [s0, s1]; stable as kappa -> 0.
double exp_integral(double kappa, double s0, double s1);

/// Doubling adaptive integration: composite Gauss-Legendre with cell counts
/// doubled until two successive values agree to rel_tol (relative to
/// max(|I|, abs_floor)). Throws QuadratureError on failure.
double adaptive_integral(const std::function<double(double)>& f, double a, double b,
                         double rel_tol, double abs_floor, int max_doublings = 16);

}  // namespace degenlab
