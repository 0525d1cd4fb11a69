#pragma once

#include <functional>
#include <vector>

#include "degenlab/errors.hpp"

namespace degenlab {

/// Uniform grid in the logarithmic coordinate s = log x.
///
/// Nodes are s_j = s_min + j*h, j = 0..n-1, with h = (s_max - s_min)/(n-1),
/// so the abscissae x_j = exp(s_j) are geometrically spaced on (0, inf).
struct LogGrid {
  double s_min = 0.0;
  double s_max = 1.0;
  int n = 2;  ///< node count

  double h() const { return (s_max - s_min) / static_cast<double>(n - 1); }
  double s(int j) const { return s_min + static_cast<double>(j) * h(); }
  double x(int j) const;

  bool operator==(const LogGrid&) const = default;
};

/// Build a log grid with node count n spanning [x_min, x_max].
///
/// Requires 0 < x_min < x_max and n >= 3; the solvers additionally require
/// n >= 16 at their entry points.
LogGrid build_log_grid(double x_min, double x_max, int n);

/// How node values are extended between nodes.
enum class Interp {
  PiecewiseLinear,           ///< linear in s between adjacent nodes
  PiecewiseConstantMidpoint  ///< nearest-node constant; jumps at cell midpoints
};

/// A function on (0, inf) carried by node values on a LogGrid.
///
/// The function is identified with its interpolant on [x(0), x(n-1)] and taken
/// to vanish outside; norms integrate the interpolant over the grid range.
class SampledFunction {
 public:
  SampledFunction(LogGrid grid, std::vector<double> values,
                  Interp interp = Interp::PiecewiseLinear);

  const LogGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  Interp interp() const { return interp_; }
  int size() const { return static_cast<int>(values_.size()); }

  /// Interpolant at the log coordinate s; zero outside [s_min, s_max].
  double value_at_s(double s) const;

  /// Interpolant at x > 0; zero outside the grid range.
  double operator()(double x) const;

  /// Node samples of d/ds (equivalently x*du/dx): centered differences in the
  /// interior, one-sided at the two boundary nodes.
  std::vector<double> log_derivative_values() const;

  /// Sample f(x) at the nodes.
  static SampledFunction sample(const LogGrid& grid,
                                const std::function<double(double)>& f_of_x,
                                Interp interp = Interp::PiecewiseLinear);

  /// Sample v(s) at the nodes.
  static SampledFunction sample_s(const LogGrid& grid,
                                  const std::function<double(double)>& v_of_s,
                                  Interp interp = Interp::PiecewiseLinear);

  static SampledFunction zero(const LogGrid& grid);

 private:
  LogGrid grid_;
  std::vector<double> values_;
  Interp interp_;
};

}  // namespace degenlab
