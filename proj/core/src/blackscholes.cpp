#include <algorithm>
#include <cmath>
#include <vector>

#include "degenlab/exact1d.hpp"
#include "degenlab/quadrature.hpp"

namespace degenlab {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310002;

void check_market(const MarketParams& params) {
  if (!(params.sigma > 0.0) || !std::isfinite(params.sigma)) {
    fail(ErrorKind::InvalidSpec, "volatility must be positive");
  }
  if (!(params.horizon > 0.0) || !std::isfinite(params.horizon)) {
    fail(ErrorKind::InvalidSpec, "horizon must be positive");
  }
  if (!std::isfinite(params.r)) {
    fail(ErrorKind::InvalidSpec, "rate must be finite");
  }
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

}  // namespace

double Payoff::operator()(double y) const {
  switch (kind) {
    case PayoffKind::Call:
      return std::max(y - strike, 0.0);
    case PayoffKind::Put:
      return std::max(strike - y, 0.0);
    case PayoffKind::Constant:
      return 1.0;
    case PayoffKind::Asset:
      return y;
    case PayoffKind::Indicator:
      return (y > lo && y < hi) ? 1.0 : 0.0;
  }
  return 0.0;
}

double bs_density(double x, double y, const MarketParams& params) {
  check_market(params);
  if (!(x > 0.0) || !(y > 0.0)) {
    fail(ErrorKind::DomainError, "spot values must be positive");
  }
  const double h = params.horizon;
  const double sd = params.sigma * std::sqrt(h);
  const double m = std::log(x) + (params.r - 0.5 * params.sigma * params.sigma) * h;
  const double z = (std::log(y) - m) / sd;
  return std::exp(-0.5 * z * z) / (y * sd * kSqrt2Pi);
}

double bs_solve(const MarketParams& params, const Payoff& payoff, double x) {
  check_market(params);
  if (!(x > 0.0)) fail(ErrorKind::DomainError, "spot must be positive");
  const double h = params.horizon;
  const double sd = params.sigma * std::sqrt(h);
  const double m = std::log(x) + (params.r - 0.5 * params.sigma * params.sigma) * h;
  const double t_lo = m - 12.0 * sd;
  const double t_hi = m + 12.0 * sd;

  std::vector<double> cuts{t_lo, t_hi};
  auto add_cut = [&](double y) {
    if (y > 0.0) {
      const double t = std::log(y);
      if (t > t_lo && t < t_hi) cuts.push_back(t);
    }
  };
  if (payoff.kind == PayoffKind::Call || payoff.kind == PayoffKind::Put) {
    add_cut(payoff.strike);
  }
  if (payoff.kind == PayoffKind::Indicator) {
    add_cut(payoff.lo);
    add_cut(payoff.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto integrand = [&](double t) {
    const double z = (t - m) / sd;
    return payoff(std::exp(t)) * std::exp(-0.5 * z * z) / (sd * kSqrt2Pi);
  };
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    acc += adaptive_integral(integrand, cuts[i], cuts[i + 1], 1e-12,
                             1e-14 * std::max(x, 1.0));
  }
  return std::exp(-params.r * h) * acc;
}

double bs_closed_form(const MarketParams& params, const Payoff& payoff, double x) {
  check_market(params);
  if (!(x > 0.0)) fail(ErrorKind::DomainError, "spot must be positive");
  const double h = params.horizon;
  const double disc = std::exp(-params.r * h);
  switch (payoff.kind) {
    case PayoffKind::Constant:
      return disc;
    case PayoffKind::Asset:
      return x;
    case PayoffKind::Call:
    case PayoffKind::Put:
      break;
    case PayoffKind::Indicator:
      fail(ErrorKind::InvalidSpec, "no closed form for indicator payoffs");
  }
  const double K = payoff.strike;
  if (!(K > 0.0)) fail(ErrorKind::InvalidSpec, "strike must be positive");
  const double sd = params.sigma * std::sqrt(h);
  const double d1 =
      (std::log(x / K) + (params.r + 0.5 * params.sigma * params.sigma) * h) / sd;
  const double d2 = d1 - sd;
  if (payoff.kind == PayoffKind::Call) {
    return x * normal_cdf(d1) - K * disc * normal_cdf(d2);
  }
  return K * disc * normal_cdf(-d2) - x * normal_cdf(-d1);
}

}  // namespace degenlab
