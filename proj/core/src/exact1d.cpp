#include "degenlab/exact1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "degenlab/quadrature.hpp"

namespace degenlab {

IndicialRoots indicial_roots(const LowerOrderRatios& ratios) {
  const double B = 1.0 + ratios.n_b + ratios.n_bhat;
  const double C = ratios.n_c;
  const double disc = B * B + 4.0 * C;
  if (!(disc > 1e-10)) {
    fail(ErrorKind::DegenerateRoots,
         "characteristic discriminant below tolerance");
  }
  const double root = std::sqrt(disc);
  const double sgn = B < 0.0 ? -1.0 : 1.0;
  const double q = -0.5 * (B + sgn * root);
  const double other = -C / q;
  IndicialRoots r;
  r.alpha = std::min(q, other);
  r.beta = std::max(q, other);
  return r;
}

ThetaWindow admissible_theta(const IndicialRoots& roots, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) fail(ErrorKind::InvalidSpec, "need p > 1");
  return ThetaWindow{roots.alpha * p, roots.beta * p};
}

ThetaRegime classify_theta(const ThetaWindow& window, double theta, double tol) {
  if (std::abs(theta - window.lo) < tol || std::abs(theta - window.hi) < tol) {
    return ThetaRegime::Forbidden;
  }
  if (theta < window.lo) return ThetaRegime::BelowWindow;
  if (theta > window.hi) return ThetaRegime::AboveWindow;
  return ThetaRegime::Interior;
}

EulerProblem gauge_shift(const EulerProblem& problem, double gamma) {
  EulerProblem out;
  out.a = problem.a;
  out.lambda = problem.lambda;
  const auto& r = problem.ratios;
  out.ratios.n_b = r.n_b + gamma;
  out.ratios.n_bhat = r.n_bhat + gamma;
  out.ratios.n_c =
      r.n_c - gamma * (gamma + 1.0) - gamma * r.n_b - gamma * r.n_bhat;
  out.F = problem.F.power_shifted(gamma);
  out.f = problem.f.power_shifted(gamma).plus(
      problem.F.power_shifted(gamma - 1.0).scaled(-gamma));
  return out;
}

double normalizing_gamma(double p, double theta, const LowerOrderRatios& ratios) {
  if (!(p > 1.0) || !std::isfinite(p)) fail(ErrorKind::InvalidSpec, "need p > 1");
  return (theta + 1.0 + ratios.n_b - (p - 1.0) * ratios.n_bhat) / (2.0 * p - 2.0);
}

ExactEulerSolution::ExactEulerSolution(const EulerProblem& problem, double p,
                                       double theta)
    : problem_(problem), p_(p), theta_(theta) {
  if (problem.lambda != 0.0) {
    fail(ErrorKind::InvalidSpec, "closed-form solve requires lambda = 0");
  }
  if (!(problem.a > 0.0) || !std::isfinite(problem.a)) {
    fail(ErrorKind::InvalidSpec, "leading coefficient must be positive");
  }
  roots_ = indicial_roots(problem.ratios);
  const ThetaWindow window = admissible_theta(roots_, p);
  regime_ = classify_theta(window, theta);
  if (regime_ == ThetaRegime::Forbidden) {
    fail(ErrorKind::ForbiddenExponent,
         "theta sits on an endpoint of the admissible window");
  }
  const double alpha = roots_.alpha;
  const double beta = roots_.beta;
  const double K = 1.0 / (problem.a * (beta - alpha));
  // A1(x) = K (alpha-1) int y^{alpha-2} F - K int y^{alpha-1} f
  g1_ = problem.F.power_shifted(alpha - 2.0)
            .scaled(K * (alpha - 1.0))
            .plus(problem.f.power_shifted(alpha - 1.0).scaled(-K));
  // A2(x) = -K (beta-1) int y^{beta-2} F + K int y^{beta-1} f
  g2_ = problem.F.power_shifted(beta - 2.0)
            .scaled(-K * (beta - 1.0))
            .plus(problem.f.power_shifted(beta - 1.0).scaled(K));
  a1_inf_ = g1_.integral_power_full(0.0);
  a2_inf_ = g2_.integral_power_full(0.0);
  switch (regime_) {
    case ThetaRegime::BelowWindow:
      b1_ = 0.0;
      b2_ = 0.0;
      break;
    case ThetaRegime::Interior:
      b1_ = -a1_inf_;
      b2_ = 0.0;
      break;
    case ThetaRegime::AboveWindow:
      b1_ = -a1_inf_;
      b2_ = -a2_inf_;
      break;
    case ThetaRegime::Forbidden:
      break;  // unreachable
  }
}

double ExactEulerSolution::A1(double x) const {
  return g1_.integral_power_prefix(0.0, x);
}

double ExactEulerSolution::A2(double x) const {
  return g2_.integral_power_prefix(0.0, x);
}

double ExactEulerSolution::operator()(double x) const {
  if (!(x > 0.0)) fail(ErrorKind::DomainError, "x must be positive");
  return (A1(x) + b1_) * std::pow(x, -roots_.alpha) +
         (A2(x) + b2_) * std::pow(x, -roots_.beta);
}

double ExactEulerSolution::x_derivative(double x) const {
  if (!(x > 0.0)) fail(ErrorKind::DomainError, "x must be positive");
  return -roots_.alpha * (A1(x) + b1_) * std::pow(x, -roots_.alpha) -
         roots_.beta * (A2(x) + b2_) * std::pow(x, -roots_.beta) -
         problem_.F(x) / (problem_.a * x);
}

namespace {

// integral over a ray of |c1 e^{e1 s} + c2 e^{e2 s}|^p e^{theta s} ds with
// exact single-exponential far field; left = true means the ray (-inf, edge]
double ray_integral(double c1, double e1, double c2, double e2, double theta,
                    double p, double edge, bool left) {
  const double inf = std::numeric_limits<double>::infinity();
  auto single = [&](double c, double e) -> double {
    if (c == 0.0) return 0.0;
    const double kappa = theta + e * p;
    if (left) {
      if (!(kappa > 0.0)) return inf;
      return std::pow(std::abs(c), p) * std::exp(kappa * edge) / kappa;
    }
    if (!(kappa < 0.0)) return inf;
    return std::pow(std::abs(c), p) * std::exp(kappa * edge) / (-kappa);
  };
  if (c1 == 0.0 && c2 == 0.0) return 0.0;
  if (c2 == 0.0) return single(c1, e1);
  if (c1 == 0.0) return single(c2, e2);
  // both present: the term whose exponent dominates toward the ray's far end
  // is (e smaller ? at -inf : e larger ? at +inf)
  double cd = c1, ed = e1, cs = c2, es = e2;
  if ((left && e2 < e1) || (!left && e2 > e1)) {
    std::swap(cd, cs);
    std::swap(ed, es);
  }
  // split where the subordinate term falls below 1e-18 relative
  const double gap = left ? (es - ed) : (ed - es);  // > 0
  const double split_dist = std::log(1e18 * std::abs(cs) / std::abs(cd)) / gap;
  const double split = left ? edge - std::max(split_dist, 0.0)
                            : edge + std::max(split_dist, 0.0);
  const double kappa_d = theta + ed * p;
  if (left ? !(kappa_d > 0.0) : !(kappa_d < 0.0)) return inf;
  const double far_part = std::pow(std::abs(cd), p) *
                          std::exp(kappa_d * split) /
                          (left ? kappa_d : -kappa_d);
  auto val = [&](double s) {
    return c1 * std::exp(e1 * s) + c2 * std::exp(e2 * s);
  };
  auto f = [&](double s) {
    return std::pow(std::abs(val(s)), p) * std::exp(theta * s);
  };
  const double lo = left ? split : edge;
  const double hi = left ? edge : split;
  const double span = hi - lo;
  int cells = static_cast<int>(span / 0.05) + 16;
  cells = std::min(cells, 40000);
  const double near_part = gauss_legendre_signsplit(f, val, lo, hi, cells);
  return far_part + near_part;
}

}  // namespace

double ExactEulerSolution::norm_of(const std::function<double(double)>& value_at_s,
                                   double c1_left, double c2_left,
                                   double c1_right, double c2_right) const {
  const double e1 = -roots_.alpha;
  const double e2 = -roots_.beta;
  double s_lo = std::numeric_limits<double>::infinity();
  double s_hi = -std::numeric_limits<double>::infinity();
  for (const auto* data : {&problem_.F, &problem_.f}) {
    if (!data->is_zero()) {
      s_lo = std::min(s_lo, std::log(data->support_lo()));
      s_hi = std::max(s_hi, std::log(data->support_hi()));
    }
  }
  if (!std::isfinite(s_lo)) {
    // no data: u is the homogeneous part with zero constants
    return 0.0;
  }
  double acc = ray_integral(c1_left, e1, c2_left, e2, theta_, p_, s_lo, true);
  acc += ray_integral(c1_right, e1, c2_right, e2, theta_, p_, s_hi, false);

  // middle: split at data breakpoints, Gauss-Legendre with crossing splits
  std::vector<double> cuts;
  for (const auto* data : {&problem_.F, &problem_.f}) {
    for (double b : data->breakpoints()) {
      if (b > 0.0) cuts.push_back(std::log(b));
    }
  }
  cuts.push_back(s_lo);
  cuts.push_back(s_hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i], b = cuts[i + 1];
    if (!(b > a)) continue;
    auto f = [&](double s) {
      return std::pow(std::abs(value_at_s(s)), p_) * std::exp(theta_ * s);
    };
    const int cells = std::max(16, static_cast<int>((b - a) / 0.02));
    acc += gauss_legendre_signsplit(f, value_at_s, a, b, cells);
  }
  return std::pow(acc, 1.0 / p_);
}

double ExactEulerSolution::solution_norm() const {
  auto val = [this](double s) { return (*this)(std::exp(s)); };
  return norm_of(val, b1_, b2_, a1_inf_ + b1_, a2_inf_ + b2_);
}

double ExactEulerSolution::x_derivative_norm() const {
  auto val = [this](double s) { return x_derivative(std::exp(s)); };
  const double a = roots_.alpha;
  const double b = roots_.beta;
  return norm_of(val, -a * b1_, -b * b2_, -a * (a1_inf_ + b1_),
                 -b * (a2_inf_ + b2_));
}

SampledFunction ExactEulerSolution::sample(const LogGrid& grid, Interp interp) const {
  return SampledFunction::sample(
      grid, [this](double x) { return (*this)(x); }, interp);
}

SampledFunction euler_solve_exact(const EulerProblem& problem, double p,
                                  double theta, const LogGrid& grid) {
  ExactEulerSolution sol(problem, p, theta);
  return sol.sample(grid);
}

double TestBump::value(double s) const {
  const double t = (s - center) / width;
  const double q = 1.0 - t * t;
  if (q <= 0.0) return 0.0;
  return amplitude * std::exp(-1.0 / q);
}

double TestBump::deriv(double s) const {
  const double t = (s - center) / width;
  const double q = 1.0 - t * t;
  if (q <= 0.0) return 0.0;
  return amplitude * std::exp(-1.0 / q) * (-2.0 * t / (q * q)) / width;
}

double weak_residual(const EulerProblem& problem, const ExactEulerSolution& u,
                     const TestBump& phi) {
  const double a = problem.a;
  const double b = problem.ratios.n_b * a;
  const double bhat = problem.ratios.n_bhat * a;
  const double c = problem.ratios.n_c * a;
  const double lam = problem.lambda;

  const double lo = phi.center - phi.width;
  const double hi = phi.center + phi.width;
  std::vector<double> cuts{lo, hi};
  for (const auto* data : {&problem.F, &problem.f}) {
    for (double bp : data->breakpoints()) {
      if (bp > 0.0) {
        const double s = std::log(bp);
        if (s > lo && s < hi) cuts.push_back(s);
      }
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double s0 = cuts[i], s1 = cuts[i + 1];
    auto integrand_lhs = [&](double s) {
      const double x = std::exp(s);
      const double v = u(x);
      const double vs = u.x_derivative(x);
      const double psi = phi.value(s);
      const double dpsi = phi.deriv(s);
      double acc = a * vs * (2.0 * psi + dpsi);
      acc += b * vs * psi;
      acc -= bhat * v * (psi + dpsi);
      acc += (c + lam) * v * psi;
      return acc * x;
    };
    auto integrand_rhs = [&](double s) {
      const double x = std::exp(s);
      return -problem.F(x) * phi.deriv(s) + problem.f(x) * phi.value(s) * x;
    };
    const int cells = std::max(24, static_cast<int>((s1 - s0) / 0.01));
    lhs += gauss_legendre(integrand_lhs, s0, s1, cells);
    rhs += gauss_legendre(integrand_rhs, s0, s1, cells);
  }
  return std::abs(lhs - rhs);
}

}  // namespace degenlab
