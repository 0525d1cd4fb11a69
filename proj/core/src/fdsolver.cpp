#include "degenlab/fdsolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "degenlab/quadrature.hpp"
#include "degenlab/weighted_spaces.hpp"

namespace degenlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_field_shape(const PiecewiseField& f, const char* name) {
  if (f.values.size() != f.breaks.size() + 1 || f.values.empty()) {
    fail(ErrorKind::InvalidSpec, std::string(name) + ": malformed field");
  }
  for (std::size_t i = 0; i + 1 < f.breaks.size(); ++i) {
    if (!(f.breaks[i] < f.breaks[i + 1])) {
      fail(ErrorKind::InvalidSpec, std::string(name) + ": breaks not ascending");
    }
  }
  for (double v : f.values) {
    if (!std::isfinite(v)) {
      fail(ErrorKind::InvalidSpec, std::string(name) + ": non-finite value");
    }
  }
}

void check_field_range(const PiecewiseField& f, const char* name, double lo,
                       double hi) {
  for (double v : f.values) {
    if (v < lo - 1e-12 || v > hi + 1e-12) {
      fail(ErrorKind::InvalidSpec,
           std::string(name) + ": value outside the admissible band");
    }
  }
}

/// integral over (s0, s1) of a(e^s) ds, or of 1/a(e^s) when recip is set
double log_field_integral(const PiecewiseField& f, double s0, double s1,
                          bool recip) {
  double acc = 0.0;
  double lo = s0;
  for (std::size_t k = 0; k < f.values.size(); ++k) {
    double piece_hi = kInf;
    if (k < f.breaks.size()) {
      piece_hi = f.breaks[k] > 0.0 ? std::log(f.breaks[k]) : -kInf;
    }
    const double hi = std::min(piece_hi, s1);
    if (hi > lo) {
      const double v = f.values[k];
      acc += recip ? (hi - lo) / v : (hi - lo) * v;
      lo = hi;
    }
    if (piece_hi >= s1) break;
  }
  return acc;
}

struct SpatialOperator {
  std::vector<double> sub, diag, super;  ///< interior unknowns, lambda-free
  std::vector<double> rhs;               ///< weak right-hand side per node
  int n_int = 0;
  double h = 0.0;
};

void apply_tridiagonal(const std::vector<double>& sub,
                       const std::vector<double>& diag,
                       const std::vector<double>& super,
                       const std::vector<double>& v, std::vector<double>& out) {
  const std::size_t n = diag.size();
  out.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = diag[j] * v[j];
    if (j > 0) acc += sub[j] * v[j - 1];
    if (j + 1 < n) acc += super[j] * v[j + 1];
    out[j] = acc;
  }
}

const std::vector<PowerTerm>* piece_terms_at(const PowerPiecewise& g, double x) {
  for (const auto& pc : g.pieces()) {
    if (x > pc.lo && x < pc.hi) return &pc.terms;
  }
  return nullptr;
}

SpatialOperator assemble(const RoughCoefficients& coeffs,
                         const LowerOrderRatios& ratios, const GridData& data,
                         const LogGrid& grid) {
  const int n = grid.n;
  const double h = grid.h();
  SpatialOperator op;
  op.n_int = n - 2;
  op.h = h;
  op.sub.assign(op.n_int, 0.0);
  op.diag.assign(op.n_int, 0.0);
  op.super.assign(op.n_int, 0.0);
  op.rhs.assign(op.n_int, 0.0);

  const double wb = 1.0 + ratios.n_b;

  std::vector<double> a_harm(n - 1), a_arith(n - 1);
  for (int c = 0; c < n - 1; ++c) {
    const double s0 = grid.s(c), s1 = grid.s(c + 1);
    const double rec = log_field_integral(coeffs.a, s0, s1, true);
    a_harm[c] = h / rec;
    a_arith[c] = log_field_integral(coeffs.a, s0, s1, false) / h;
  }

  for (int i = 1; i <= n - 2; ++i) {
    const int j = i - 1;
    const double aL = a_harm[i - 1], aR = a_harm[i];
    const double wL = wb * a_arith[i - 1], wR = wb * a_arith[i];
    const double gL = ratios.n_bhat * a_arith[i - 1];
    const double gR = ratios.n_bhat * a_arith[i];
    double sub = -aL / h, diag = (aL + aR) / h, super = -aR / h;
    sub += -0.5 * wL;
    diag += 0.5 * (wL - wR);
    super += 0.5 * wR;
    sub += -0.5 * gL;
    diag += 0.5 * (gR - gL);
    super += 0.5 * gR;
    diag += ratios.n_c *
            log_field_integral(coeffs.a, grid.s(i) - 0.5 * h, grid.s(i) + 0.5 * h,
                               false);
    op.sub[j] = sub;
    op.diag[j] = diag;
    op.super[j] = super;
  }

  std::vector<double> cuts;
  for (const auto* g : {&data.F, &data.f}) {
    for (double b : g->breakpoints()) {
      if (b > 0.0) cuts.push_back(std::log(b));
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // weak right-hand side against the hat at node i:
  //   -int F(e^s) e^{-s} (psi' - psi) ds + int f(e^s) psi ds + int f_s psi ds
  auto half_cell = [&](int i, double sa, double sb, double A, double B,
                       double dpsi) {
    double acc = 0.0;
    std::vector<double> edges{sa, sb};
    for (double c : cuts) {
      if (c > sa && c < sb) edges.push_back(c);
    }
    std::sort(edges.begin(), edges.end());
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
      const double u0 = edges[k], u1 = edges[k + 1];
      if (!(u1 > u0)) continue;
      const double xm = std::exp(0.5 * (u0 + u1));
      if (const auto* terms = piece_terms_at(data.F, xm)) {
        for (const auto& t : *terms) {
          acc -= t.coef *
                 exp_linear_integral(t.exponent - 1.0, u0, u1, dpsi - A, -B);
        }
      }
      if (const auto* terms = piece_terms_at(data.f, xm)) {
        for (const auto& t : *terms) {
          acc += t.coef * exp_linear_integral(t.exponent, u0, u1, A, B);
        }
      }
    }
    if (data.has_callable()) {
      const double lo = std::max(sa, data.f_s_lo);
      const double hi = std::min(sb, data.f_s_hi);
      if (hi > lo) {
        acc += gauss_legendre(
            [&](double s) { return data.f_s(s) * (A + B * s); }, lo, hi, 2);
      }
    }
    op.rhs[i - 1] += acc;
  };

  for (int i = 1; i <= n - 2; ++i) {
    const double si = grid.s(i);
    half_cell(i, si - h, si, -(si - h) / h, 1.0 / h, 1.0 / h);
    half_cell(i, si, si + h, (si + h) / h, -1.0 / h, -1.0 / h);
  }
  return op;
}

void check_truncation(const GridData& data, const LogGrid& grid) {
  const double x_lo = grid.x(0), x_hi = grid.x(grid.n - 1);
  for (const auto* g : {&data.F, &data.f}) {
    if (g->is_zero()) continue;
    if (!(g->support_lo() > x_lo) || !(g->support_hi() < x_hi)) {
      fail(ErrorKind::TruncationError,
           "data support reaches the truncated boundary");
    }
  }
  if (data.has_callable()) {
    if (!(data.f_s_lo > grid.s_min) || !(data.f_s_hi < grid.s_max) ||
        !(data.f_s_hi >= data.f_s_lo)) {
      fail(ErrorKind::TruncationError,
           "callable source support reaches the truncated boundary");
    }
  }
}

double certificate_for(const GridData& data, const LogGrid& grid,
                       const IndicialRoots& roots, double p, double theta) {
  double s_lo = kInf, s_hi = -kInf;
  for (const auto* g : {&data.F, &data.f}) {
    if (g->is_zero()) continue;
    s_lo = std::min(s_lo, std::log(g->support_lo()));
    s_hi = std::max(s_hi, std::log(g->support_hi()));
  }
  if (data.has_callable()) {
    s_lo = std::min(s_lo, data.f_s_lo);
    s_hi = std::max(s_hi, data.f_s_hi);
  }
  double margin;
  if (std::isfinite(s_lo)) {
    margin = std::min(s_lo - grid.s_min, grid.s_max - s_hi);
  } else {
    margin = 0.5 * (grid.s_max - grid.s_min);
  }
  const double dist =
      std::min(std::abs(roots.alpha - theta / p), std::abs(roots.beta - theta / p));
  return std::exp(-dist * margin);
}

}  // namespace

double PiecewiseField::operator()(double v) const {
  const std::size_t idx =
      std::upper_bound(breaks.begin(), breaks.end(), v) - breaks.begin();
  return values[idx];
}

double PiecewiseField::average(double lo, double hi) const {
  if (!(hi > lo)) fail(ErrorKind::DomainError, "empty averaging interval");
  double acc = 0.0;
  double cursor = lo;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double piece_hi = k < breaks.size() ? breaks[k] : kInf;
    const double edge = std::min(piece_hi, hi);
    if (edge > cursor) {
      acc += (edge - cursor) * values[k];
      cursor = edge;
    }
    if (piece_hi >= hi) break;
  }
  return acc / (hi - lo);
}

double PiecewiseField::harmonic_average(double lo, double hi) const {
  if (!(hi > lo)) fail(ErrorKind::DomainError, "empty averaging interval");
  double acc = 0.0;
  double cursor = lo;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double piece_hi = k < breaks.size() ? breaks[k] : kInf;
    const double edge = std::min(piece_hi, hi);
    if (edge > cursor) {
      if (!(values[k] > 0.0)) {
        fail(ErrorKind::InvalidSpec, "harmonic average needs positive values");
      }
      acc += (edge - cursor) / values[k];
      cursor = edge;
    }
    if (piece_hi >= hi) break;
  }
  return (hi - lo) / acc;
}

PiecewiseField PiecewiseField::constant_field(double c, Var var) {
  PiecewiseField f;
  f.var = var;
  f.values = {c};
  return f;
}

void RoughCoefficients::validate() const {
  if (!(nu > 0.0) || !(nu <= 1.0) || !std::isfinite(nu)) {
    fail(ErrorKind::InvalidSpec, "ellipticity ratio nu must lie in (0, 1]");
  }
  if (!(K >= 1.0) || !std::isfinite(K)) {
    fail(ErrorKind::InvalidSpec, "time-weight band K must be >= 1");
  }
  check_field_shape(a, "a");
  check_field_shape(a0, "a0");
  check_field_shape(c0, "c0");
  if (a.var != PiecewiseField::Var::X) {
    fail(ErrorKind::InvalidSpec, "a must vary in x");
  }
  for (double b : a.breaks) {
    if (!(b > 0.0)) fail(ErrorKind::InvalidSpec, "spatial breaks must be positive");
  }
  if (a0.var != PiecewiseField::Var::T || c0.var != PiecewiseField::Var::T) {
    fail(ErrorKind::InvalidSpec, "a0 and c0 must vary in t");
  }
  check_field_range(a, "a", nu, 1.0 / nu);
  check_field_range(a0, "a0", 1.0 / K, K);
  check_field_range(c0, "c0", 1.0 / K, K);
}

void solve_tridiagonal(std::vector<double>& sub, std::vector<double>& diag,
                       std::vector<double>& super, std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  if (n == 0 || sub.size() != n || super.size() != n || rhs.size() != n) {
    fail(ErrorKind::InvalidSpec, "tridiagonal arrays must share one length");
  }
  for (std::size_t j = 1; j < n; ++j) {
    const double piv = diag[j - 1];
    if (!(std::abs(piv) > 1e-250)) {
      fail(ErrorKind::SingularOperator, "pivot breakdown in tridiagonal solve");
    }
    const double m = sub[j] / piv;
    diag[j] -= m * super[j - 1];
    rhs[j] -= m * rhs[j - 1];
  }
  if (!(std::abs(diag[n - 1]) > 1e-250)) {
    fail(ErrorKind::SingularOperator, "pivot breakdown in tridiagonal solve");
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t j = n - 1; j-- > 0;) {
    rhs[j] = (rhs[j] - super[j] * rhs[j + 1]) / diag[j];
  }
}

SolveReport elliptic_solve_fd(const RoughCoefficients& coeffs,
                              const LowerOrderRatios& ratios, double lambda,
                              const GridData& data, const LogGrid& grid,
                              double p, double theta) {
  coeffs.validate();
  if (grid.n < 16) fail(ErrorKind::InvalidGrid, "solver grids need n >= 16");
  if (!(lambda >= 0.0)) fail(ErrorKind::InvalidSpec, "lambda must be >= 0");
  if (!(p > 1.0)) fail(ErrorKind::InvalidSpec, "need p > 1");
  check_truncation(data, grid);
  const IndicialRoots roots = indicial_roots(ratios);

  SpatialOperator op = assemble(coeffs, ratios, data, grid);
  const double c0v = coeffs.c0(0.0);
  std::vector<double> diag = op.diag;
  for (double& d : diag) d += lambda * c0v * op.h;

  std::vector<double> sub = op.sub, super = op.super, sol = op.rhs;
  solve_tridiagonal(sub, diag, super, sol);

  std::vector<double> av;
  {
    std::vector<double> d2 = op.diag;
    for (double& d : d2) d += lambda * c0v * op.h;
    apply_tridiagonal(op.sub, d2, op.super, sol, av);
  }
  double res = 0.0, bmax = 0.0;
  for (int j = 0; j < op.n_int; ++j) {
    res = std::max(res, std::abs(av[j] - op.rhs[j]));
    bmax = std::max(bmax, std::abs(op.rhs[j]));
  }

  std::vector<double> full(grid.n, 0.0);
  for (int j = 0; j < op.n_int; ++j) full[j + 1] = sol[j];

  SolveReport report{
      SampledFunction(grid, full, Interp::PiecewiseLinear),
      res / std::max(bmax, std::numeric_limits<double>::epsilon()),
      true,
      0,
      certificate_for(data, grid, roots, p, theta),
      lambda == 0.0 &&
          classify_theta(admissible_theta(roots, p), theta) != ThetaRegime::Interior,
      theta,
      lambda};
  return report;
}

ParabolicReport parabolic_solve_fd(
    const RoughCoefficients& coeffs, const LowerOrderRatios& ratios,
    double lambda, const GridData& data,
    const std::function<double(double)>& time_profile, const LogGrid& grid,
    const TimeGrid& tg, double p, double theta, TimeScheme scheme,
    const std::function<void(int, double, const std::vector<double>&)>& observer) {
  coeffs.validate();
  if (grid.n < 16) fail(ErrorKind::InvalidGrid, "solver grids need n >= 16");
  if (tg.m < 1 || !(tg.t_end > 0.0)) {
    fail(ErrorKind::InvalidSpec, "time grid needs t_end > 0 and m >= 1");
  }
  if (!(lambda >= 0.0)) fail(ErrorKind::InvalidSpec, "lambda must be >= 0");
  if (!(p > 1.0)) fail(ErrorKind::InvalidSpec, "need p > 1");
  if (!time_profile) fail(ErrorKind::InvalidSpec, "missing time profile");
  check_truncation(data, grid);
  const IndicialRoots roots = indicial_roots(ratios);

  SpatialOperator op = assemble(coeffs, ratios, data, grid);
  const int n = grid.n;
  const int ni = op.n_int;
  const double h = op.h;
  const double dt = tg.dt();
  const double tw = scheme == TimeScheme::CrankNicolson ? 0.5 : 1.0;
  const NormSpec spec{p, theta, p};

  std::vector<double> v(ni, 0.0), full(n, 0.0);
  if (observer) observer(0, 0.0, full);

  auto spatial_norms = [&](const std::vector<double>& vals,
                           double& un, double& dn) {
    SampledFunction carrier(grid, vals, Interp::PiecewiseLinear);
    un = lp_theta_norm(carrier, spec);
    SampledFunction dcar(grid, carrier.log_derivative_values(),
                         Interp::PiecewiseLinear);
    dn = lp_theta_norm(dcar, spec);
  };

  double res_worst = 0.0, defect_worst = 0.0, rhs_scale = 1.0;
  double acc_u = 0.0, acc_d = 0.0;
  double prev_un = 0.0, prev_dn = 0.0;
  std::vector<double> sub(ni), diag(ni), super(ni), rhs(ni), av(ni), vn(ni);
  std::vector<double> diag_full(ni);

  for (int k = 1; k <= tg.m; ++k) {
    const double t_k = dt * k;
    const double tau = scheme == TimeScheme::CrankNicolson ? t_k - 0.5 * dt : t_k;
    const double a0k = coeffs.a0(tau);
    const double c0k = coeffs.c0(tau);
    const double gk = time_profile(tau);

    for (int j = 0; j < ni; ++j) diag_full[j] = op.diag[j] + lambda * c0k * h;

    apply_tridiagonal(op.sub, diag_full, op.super, v, av);
    const double mass = a0k * h / dt;
    for (int j = 0; j < ni; ++j) {
      sub[j] = tw * op.sub[j];
      super[j] = tw * op.super[j];
      diag[j] = mass + tw * diag_full[j];
      rhs[j] = mass * v[j] - (1.0 - tw) * av[j] + gk * op.rhs[j];
    }
    vn = rhs;
    {
      std::vector<double> s2 = sub, d2 = diag, p2 = super;
      solve_tridiagonal(s2, d2, p2, vn);
    }

    // per-step linear residual and theta-scheme defect
    std::vector<double> lv;
    apply_tridiagonal(sub, diag, super, vn, lv);
    double rn = 0.0, rb = 0.0;
    for (int j = 0; j < ni; ++j) {
      rn = std::max(rn, std::abs(lv[j] - rhs[j]));
      rb = std::max(rb, std::abs(rhs[j]));
    }
    res_worst = std::max(
        res_worst, rn / std::max(rb, std::numeric_limits<double>::epsilon()));

    std::vector<double> avn;
    apply_tridiagonal(op.sub, diag_full, op.super, vn, avn);
    for (int j = 0; j < ni; ++j) {
      const double d = a0k * h * (vn[j] - v[j]) +
                       dt * (tw * avn[j] + (1.0 - tw) * av[j]) -
                       dt * gk * op.rhs[j];
      defect_worst = std::max(defect_worst, std::abs(d));
      rhs_scale = std::max(rhs_scale, std::abs(dt * gk * op.rhs[j]));
    }

    v = vn;
    for (int j = 0; j < ni; ++j) full[j + 1] = v[j];
    double un = 0.0, dn = 0.0;
    spatial_norms(full, un, dn);
    acc_u += 0.5 * dt * (std::pow(un, p) + std::pow(prev_un, p));
    acc_d += 0.5 * dt * (std::pow(dn, p) + std::pow(prev_dn, p));
    prev_un = un;
    prev_dn = dn;
    if (observer) observer(k, t_k, full);
  }

  ParabolicReport report{
      SampledFunction(grid, full, Interp::PiecewiseLinear),
      res_worst,
      defect_worst / rhs_scale,
      std::pow(acc_u, 1.0 / p),
      std::pow(acc_d, 1.0 / p),
      certificate_for(data, grid, roots, p, theta),
      lambda == 0.0 &&
          classify_theta(admissible_theta(roots, p), theta) != ThetaRegime::Interior,
      theta,
      lambda};
  return report;
}

GridData manufactured_problem(const Manufactured& u, const RoughCoefficients& coeffs,
                              const LowerOrderRatios& ratios, double lambda) {
  coeffs.validate();
  if (!coeffs.a.constant() || !coeffs.c0.constant()) {
    fail(ErrorKind::InvalidSpec,
         "manufactured sources need constant a and c0");
  }
  if (!u.v || !u.dv || !u.d2v) {
    fail(ErrorKind::InvalidSpec, "manufactured solution needs v, v', v''");
  }
  if (!(u.s_hi > u.s_lo)) {
    fail(ErrorKind::InvalidSpec, "manufactured support must be nonempty");
  }
  const double a = coeffs.a.values[0];
  const double c0v = coeffs.c0.values[0];
  const double drift = a * (1.0 + ratios.n_b + ratios.n_bhat);
  const double zero = ratios.n_c * a + lambda * c0v;
  GridData data;
  data.f_s = [=, v = u.v, dv = u.dv, d2v = u.d2v](double s) {
    return -a * d2v(s) + drift * dv(s) + zero * v(s);
  };
  data.f_s_lo = u.s_lo;
  data.f_s_hi = u.s_hi;
  return data;
}

ConvergenceReport convergence_study(const std::function<double(int)>& h_at_level,
                                    const std::function<double(int)>& error_at_level,
                                    int levels) {
  if (levels < 3) fail(ErrorKind::InvalidSpec, "need at least three levels");
  if (!h_at_level || !error_at_level) {
    fail(ErrorKind::InvalidSpec, "missing level callbacks");
  }
  ConvergenceReport report;
  report.levels.reserve(levels);
  for (int l = 0; l < levels; ++l) {
    ConvergenceLevel lev;
    lev.h = h_at_level(l);
    lev.error = error_at_level(l);
    if (!(lev.h > 0.0) || !(lev.error >= 0.0) || !std::isfinite(lev.error)) {
      fail(ErrorKind::InvalidSpec, "levels need h > 0 and finite error");
    }
    if (l == 0) {
      lev.order = std::numeric_limits<double>::quiet_NaN();
    } else {
      const auto& prev = report.levels.back();
      lev.order = std::log(prev.error / lev.error) / std::log(prev.h / lev.h);
      if (!(lev.error < prev.error)) report.monotone = false;
    }
    report.levels.push_back(lev);
  }
  report.final_order = report.levels.back().order;
  return report;
}

}  // namespace degenlab
