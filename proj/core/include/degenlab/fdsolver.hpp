#pragma once

#include <functional>
#include <optional>

#include "degenlab/exact1d.hpp"
#include "degenlab/grid.hpp"
#include "degenlab/piecewise.hpp"

namespace degenlab {

/// Piecewise-constant coefficient field in x or in t.
struct PiecewiseField {
  enum class Var { X, T };

  Var var = Var::X;
  std::vector<double> breaks;  ///< ascending jump locations
  std::vector<double> values;  ///< size breaks.size() + 1

  double operator()(double v) const;
  double average(double lo, double hi) const;           ///< arithmetic cell mean
  double harmonic_average(double lo, double hi) const;  ///< harmonic cell mean
  bool constant() const { return breaks.empty(); }

  static PiecewiseField constant_field(double c, Var var = Var::X);
};

/// Measurable-coefficient data: leading coefficient a(x) or a(t) within
/// [nu, 1/nu], time weights a0, c0 within [1/K, K]. Lower-order terms enter
/// through LowerOrderRatios (proportional to a).
struct RoughCoefficients {
  PiecewiseField a0 = PiecewiseField::constant_field(1.0, PiecewiseField::Var::T);
  PiecewiseField a = PiecewiseField::constant_field(1.0);
  PiecewiseField c0 = PiecewiseField::constant_field(1.0, PiecewiseField::Var::T);
  double nu = 1.0;
  double K = 1.0;

  void validate() const;  ///< InvalidSpec on bound violations
};

/// Right-hand side for the log-grid solvers: closed-form divergence part F and
/// source part f, plus an optional extra source given directly in s.
struct GridData {
  PowerPiecewise F;
  PowerPiecewise f;
  std::function<double(double)> f_s;  ///< optional, in log coordinates
  double f_s_lo = 0.0;                ///< support of f_s in s
  double f_s_hi = 0.0;

  bool has_callable() const { return static_cast<bool>(f_s); }
};

struct TimeGrid {
  double t_end = 1.0;
  int m = 16;  ///< step count

  double dt() const { return t_end / static_cast<double>(m); }
};

enum class TimeScheme { ImplicitEuler, CrankNicolson };

struct SolveReport {
  SampledFunction solution;
  double residual_norm = 0.0;  ///< ||A v - b||_inf / max(||b||_inf, eps)
  bool direct_factorization = true;
  int linear_solver_iterations = 0;
  double truncation_certificate = 0.0;  ///< e^{-dist(theta/p, roots) * margin}
  bool window_violation = false;        ///< lambda = 0 with theta outside the window
  double theta = 0.0;
  double lambda = 0.0;
};

/// Finite-element solve of the divergence-form problem on the log grid
/// (homogeneous Dirichlet at the truncated ends):
///   -x^2 (a u')' + x b u' + x (bhat u)' + (c + lambda c0) u = F' + f,
/// (b, bhat, c) = ratios * a. Harmonic-mean cell coefficients for the
/// second-order term, centered first-order terms, lumped mass, exact weak
/// right-hand side for power-piecewise data, Thomas factorization.
/// Requires grid.n >= 16 (InvalidGrid); data support strictly inside the grid
/// (TruncationError); pivot breakdown raises SingularOperator.
SolveReport elliptic_solve_fd(const RoughCoefficients& coeffs,
                              const LowerOrderRatios& ratios, double lambda,
                              const GridData& data, const LogGrid& grid,
                              double p, double theta);

/// Space-time norms accumulated by the parabolic solver.
struct ParabolicReport {
  SampledFunction final_solution;
  double residual_norm = 0.0;       ///< worst per-step linear residual
  double weak_residual = 0.0;       ///< tensor-test weak identity defect
  double solution_space_time_norm = 0.0;  ///< ( int ||u||^p dt )^{1/p}
  double x_derivative_space_time_norm = 0.0;
  double truncation_certificate = 0.0;
  bool window_violation = false;
  double theta = 0.0;
  double lambda = 0.0;
};

/// Theta-scheme time stepping (implicit Euler by default, Crank-Nicolson on
/// request) for  a0 u_t + L u = g(t) * (F' + f)  with zero initial data.
/// Time-dependent coefficients are sampled at step midpoints (CN) or step
/// ends (IE). The optional observer receives every accepted frame.
ParabolicReport parabolic_solve_fd(
    const RoughCoefficients& coeffs, const LowerOrderRatios& ratios,
    double lambda, const GridData& data,
    const std::function<double(double)>& time_profile, const LogGrid& grid,
    const TimeGrid& tg, double p, double theta,
    TimeScheme scheme = TimeScheme::ImplicitEuler,
    const std::function<void(int, double, const std::vector<double>&)>& observer = {});

/// Twice-differentiable manufactured solution given in log coordinates.
struct Manufactured {
  std::function<double(double)> v;    ///< v(s) = u(e^s)
  std::function<double(double)> dv;   ///< v'(s)
  std::function<double(double)> d2v;  ///< v''(s)
  double s_lo = 0.0;                  ///< support in s
  double s_hi = 0.0;
};

/// Build the source f(s) = -a v'' + a (1 + n_b + n_bhat) v' + (n_c a + lambda c0) v
/// that makes `u` the exact solution (F = 0). Requires constant a and c0.
GridData manufactured_problem(const Manufactured& u, const RoughCoefficients& coeffs,
                              const LowerOrderRatios& ratios, double lambda);

struct ConvergenceLevel {
  double h = 0.0;
  double error = 0.0;
  double order = 0.0;  ///< NaN on the first level
};

struct ConvergenceReport {
  std::vector<ConvergenceLevel> levels;
  double final_order = 0.0;
  bool monotone = true;  ///< false is the non-fatal non-convergence signal
};

/// Dyadic refinement study over `levels` levels (>= 3): caller supplies the
/// mesh size and the measured error per level.
ConvergenceReport convergence_study(const std::function<double(int)>& h_at_level,
                                    const std::function<double(int)>& error_at_level,
                                    int levels);

/// Solve a tridiagonal system in place (Thomas algorithm). Throws
/// SingularOperator on pivot breakdown. Exposed for reuse and benchmarks.
void solve_tridiagonal(std::vector<double>& sub, std::vector<double>& diag,
                       std::vector<double>& super, std::vector<double>& rhs);

}  // namespace degenlab
