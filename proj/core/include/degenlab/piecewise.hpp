#pragma once

#include <vector>

#include "degenlab/errors.hpp"

namespace degenlab {

/// One term c * x^e.
struct PowerTerm {
  double coef = 0.0;
  double exponent = 0.0;
};

/// Sum of power terms on the open interval (lo, hi), zero elsewhere.
struct PowerPiece {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<PowerTerm> terms;

  double eval(double x) const;
};

/// Closed-form data class: finitely many power-sum pieces on disjoint
/// subintervals of (0, inf).
///
/// The class is closed under scalar multiples, multiplication by x^gamma,
/// dilation x -> s*x, and addition, and admits exact weighted integrals;
/// that is what makes the exact solvers and the assembly routines exact.
class PowerPiecewise {
 public:
  PowerPiecewise() = default;  ///< the zero function
  explicit PowerPiecewise(std::vector<PowerPiece> pieces);

  static PowerPiecewise indicator(double lo, double hi, double value = 1.0);
  /// coef * x^exponent on (lo, hi).
  static PowerPiecewise power(double lo, double hi, double coef, double exponent);
  /// sum_k coeffs[k] * x^k on (lo, hi).
  static PowerPiecewise polynomial(double lo, double hi, const std::vector<double>& coeffs);

  bool is_zero() const { return pieces_.empty(); }
  const std::vector<PowerPiece>& pieces() const { return pieces_; }

  double operator()(double x) const;

  /// Support bounds; (inf, -inf) for the zero function.
  double support_lo() const;
  double support_hi() const;

  PowerPiecewise scaled(double c) const;
  /// x^gamma * this.
  PowerPiecewise power_shifted(double gamma) const;
  /// x -> this(factor * x).
  PowerPiecewise dilated(double factor) const;
  PowerPiecewise plus(const PowerPiecewise& other) const;

  /// Exact integral of y^mu * this(y) over (0, X].
  double integral_power_prefix(double mu, double X) const;
  /// Exact integral of y^mu * this(y) over (0, inf).
  double integral_power_full(double mu) const;

  /// Breakpoints (all piece endpoints, ascending).
  std::vector<double> breakpoints() const;

 private:
  std::vector<PowerPiece> pieces_;  // sorted, pairwise disjoint
};

}  // namespace degenlab
