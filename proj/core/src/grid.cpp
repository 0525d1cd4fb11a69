#include "degenlab/grid.hpp"

#include <cmath>
#include <utility>

namespace degenlab {

double LogGrid::x(int j) const { return std::exp(s(j)); }

LogGrid build_log_grid(double x_min, double x_max, int n) {
  if (!(x_min > 0.0) || !(x_max > x_min) || !std::isfinite(x_min) ||
      !std::isfinite(x_max)) {
    fail(ErrorKind::InvalidGrid, "need 0 < x_min < x_max, both finite");
  }
  if (n < 3) {
    fail(ErrorKind::InvalidGrid, "need at least 3 nodes");
  }
  return LogGrid{std::log(x_min), std::log(x_max), n};
}

SampledFunction::SampledFunction(LogGrid grid, std::vector<double> values,
                                 Interp interp)
    : grid_(grid), values_(std::move(values)), interp_(interp) {
  if (grid_.n < 3 || !(grid_.h() > 0.0) || !std::isfinite(grid_.s_min) ||
      !std::isfinite(grid_.s_max)) {
    fail(ErrorKind::InvalidGrid, "sampled function needs a valid grid");
  }
  if (static_cast<int>(values_.size()) != grid_.n) {
    fail(ErrorKind::InvalidFunction, "value count does not match the grid");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) {
      fail(ErrorKind::InvalidFunction, "non-finite node value");
    }
  }
}

double SampledFunction::value_at_s(double s) const {
  if (s < grid_.s_min || s > grid_.s_max) return 0.0;
  const double h = grid_.h();
  if (interp_ == Interp::PiecewiseConstantMidpoint) {
    int j = static_cast<int>(std::lround((s - grid_.s_min) / h));
    if (j < 0) j = 0;
    if (j >= grid_.n) j = grid_.n - 1;
    return values_[static_cast<std::size_t>(j)];
  }
  double pos = (s - grid_.s_min) / h;
  int j = static_cast<int>(std::floor(pos));
  if (j < 0) j = 0;
  if (j >= grid_.n - 1) j = grid_.n - 2;
  const double w = pos - static_cast<double>(j);
  return (1.0 - w) * values_[static_cast<std::size_t>(j)] +
         w * values_[static_cast<std::size_t>(j) + 1];
}

double SampledFunction::operator()(double x) const {
  if (!(x > 0.0)) return 0.0;
  return value_at_s(std::log(x));
}

std::vector<double> SampledFunction::log_derivative_values() const {
  const int n = grid_.n;
  const double h = grid_.h();
  std::vector<double> d(static_cast<std::size_t>(n));
  d[0] = (values_[1] - values_[0]) / h;
  for (int j = 1; j + 1 < n; ++j) {
    d[static_cast<std::size_t>(j)] =
        (values_[static_cast<std::size_t>(j) + 1] -
         values_[static_cast<std::size_t>(j) - 1]) /
        (2.0 * h);
  }
  d[static_cast<std::size_t>(n) - 1] =
      (values_[static_cast<std::size_t>(n) - 1] -
       values_[static_cast<std::size_t>(n) - 2]) /
      h;
  return d;
}

SampledFunction SampledFunction::sample(const LogGrid& grid,
                                        const std::function<double(double)>& f_of_x,
                                        Interp interp) {
  std::vector<double> v(static_cast<std::size_t>(grid.n));
  for (int j = 0; j < grid.n; ++j) {
    v[static_cast<std::size_t>(j)] = f_of_x(grid.x(j));
  }
  return SampledFunction(grid, std::move(v), interp);
}

SampledFunction SampledFunction::sample_s(const LogGrid& grid,
                                          const std::function<double(double)>& v_of_s,
                                          Interp interp) {
  std::vector<double> v(static_cast<std::size_t>(grid.n));
  for (int j = 0; j < grid.n; ++j) {
    v[static_cast<std::size_t>(j)] = v_of_s(grid.s(j));
  }
  return SampledFunction(grid, std::move(v), interp);
}

SampledFunction SampledFunction::zero(const LogGrid& grid) {
  return SampledFunction(grid, std::vector<double>(static_cast<std::size_t>(grid.n), 0.0));
}

}  // namespace degenlab
