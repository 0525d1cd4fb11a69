#include "degenlab/weighted_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "degenlab/quadrature.hpp"

namespace degenlab {

namespace {

constexpr double kSupportTol = 1e-12;  // relative cutoff for "vanishes at the ends"

double bump(double t) {
  const double q = 1.0 - t * t;
  if (q <= 0.0) return 0.0;
  return std::exp(-1.0 / q);
}

double bump_deriv(double t) {
  const double q = 1.0 - t * t;
  if (q <= 0.0) return 0.0;
  return std::exp(-1.0 / q) * (-2.0 * t / (q * q));
}

// integral over the grid range of |carrier|^p e^{theta s} ds
double lp_theta_power_integral(const SampledFunction& u, double p, double theta) {
  const LogGrid& g = u.grid();
  const auto& v = u.values();
  const double h = g.h();
  double acc = 0.0;
  if (u.interp() == Interp::PiecewiseConstantMidpoint) {
    for (int j = 0; j < g.n; ++j) {
      const double val = v[static_cast<std::size_t>(j)];
      if (val == 0.0) continue;
      const double lo = std::max(g.s_min, g.s(j) - 0.5 * h);
      const double hi = std::min(g.s_max, g.s(j) + 0.5 * h);
      acc += std::pow(std::abs(val), p) * exp_integral(theta, lo, hi);
    }
    return acc;
  }
  for (int j = 0; j + 1 < g.n; ++j) {
    const double v0 = v[static_cast<std::size_t>(j)];
    const double v1 = v[static_cast<std::size_t>(j) + 1];
    if (v0 == 0.0 && v1 == 0.0) continue;
    const double s0 = g.s(j);
    const double s1 = g.s(j + 1);
    auto line = [&](double s) { return v0 + (v1 - v0) * (s - s0) / h; };
    auto f = [&](double s) {
      return std::pow(std::abs(line(s)), p) * std::exp(theta * s);
    };
    acc += gauss_legendre_signsplit(f, line, s0, s1, 1);
  }
  return acc;
}

}  // namespace

void NormSpec::validate() const {
  if (!(p > 1.0) || !std::isfinite(p)) fail(ErrorKind::InvalidSpec, "need p > 1");
  if (!(q > 1.0) || !std::isfinite(q)) fail(ErrorKind::InvalidSpec, "need q > 1");
  if (!std::isfinite(theta)) fail(ErrorKind::InvalidSpec, "theta must be finite");
}

double lp_theta_norm(const SampledFunction& u, const NormSpec& spec) {
  spec.validate();
  return std::pow(lp_theta_power_integral(u, spec.p, spec.theta), 1.0 / spec.p);
}

double h1_theta_norm(const SampledFunction& u, const NormSpec& spec) {
  spec.validate();
  const double up = lp_theta_power_integral(u, spec.p, spec.theta);
  SampledFunction du(u.grid(), u.log_derivative_values(), u.interp());
  const double dp = lp_theta_power_integral(du, spec.p, spec.theta);
  return std::pow(up + dp, 1.0 / spec.p);
}

double lp_theta_norm(const PowerPiecewise& g, double p, double theta, double mu) {
  if (!(p > 1.0)) fail(ErrorKind::InvalidSpec, "need p > 1");
  if (g.is_zero()) return 0.0;
  double acc = 0.0;
  for (const auto& piece : g.pieces()) {
    const double s0 = std::log(piece.lo);
    const double s1 = std::log(piece.hi);
    if (piece.terms.size() == 1) {
      const auto& t = piece.terms.front();
      const double kappa = theta + (t.exponent + mu) * p;
      acc += std::pow(std::abs(t.coef), p) * exp_integral(kappa, s0, s1);
      continue;
    }
    auto val = [&](double s) {
      double v = 0.0;
      for (const auto& t : piece.terms) v += t.coef * std::exp((t.exponent + mu) * s);
      return v;
    };
    auto f = [&](double s) {
      return std::pow(std::abs(val(s)), p) * std::exp(theta * s);
    };
    const int cells = std::max(16, static_cast<int>((s1 - s0) / 0.05));
    acc += gauss_legendre_signsplit(f, val, s0, s1, cells);
  }
  return std::pow(acc, 1.0 / p);
}

double CutoffFamily::zeta_s(double s) const { return amplitude * bump(s / width); }

double CutoffFamily::zeta_s_deriv(double s) const {
  return amplitude * bump_deriv(s / width) / width;
}

double CutoffFamily::zeta(double x) const {
  if (!(x > 0.0)) return 0.0;
  return zeta_s(std::log(x));
}

double cutoff_cover_min(const CutoffFamily& cut, int check_points) {
  if (check_points < 2) check_points = 2;
  double min_sum = std::numeric_limits<double>::infinity();
  // the shifted sum is 1-periodic in s; scan a bit more than one period
  for (int i = 0; i < check_points; ++i) {
    const double s = -1.0 + 3.0 * static_cast<double>(i) / (check_points - 1);
    double sum = 0.0;
    const int n_lo = static_cast<int>(std::floor(s - cut.width));
    const int n_hi = static_cast<int>(std::ceil(s + cut.width));
    for (int n = n_lo; n <= n_hi; ++n) {
      sum += std::pow(cut.zeta_s(s - n), cut.p);
    }
    min_sum = std::min(min_sum, sum);
  }
  return min_sum;
}

CutoffFamily build_cutoff(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) fail(ErrorKind::InvalidSpec, "need p > 1");
  CutoffFamily cut;
  cut.p = p;
  cut.amplitude = 1.0;
  const double raw_min = cutoff_cover_min(cut, 10000);
  if (!(raw_min > 0.0)) fail(ErrorKind::CoverageError, "bump overlap failed");
  // rescale so the shifted p-th powers sum to 1.1 at the worst point
  cut.amplitude = std::pow(1.1 / raw_min, 1.0 / p);
  cut.margin = cutoff_cover_min(cut, 10000) - 1.0;
  return cut;
}

double dyadic_norm(const SampledFunction& u, const NormSpec& spec,
                   const CutoffFamily& cut) {
  spec.validate();
  const LogGrid& g = u.grid();
  const double w = cut.width;
  const int m_lo = static_cast<int>(std::ceil(g.s_min - w));
  const int m_hi = static_cast<int>(std::floor(g.s_max + w));
  if (m_lo < cut.shift_lo || m_hi > cut.shift_hi) {
    fail(ErrorKind::CoverageError,
         "cutoff shift range does not cover the function support");
  }
  SampledFunction du(g, u.log_derivative_values(), u.interp());
  const double p = spec.p;
  double total = 0.0;
  const int cells = 256;
  for (int m = m_lo; m <= m_hi; ++m) {
    auto g_val = [&](double sigma) {
      return u.value_at_s(sigma + m) * cut.zeta_s(sigma);
    };
    auto g_deriv = [&](double sigma) {
      return du.value_at_s(sigma + m) * cut.zeta_s(sigma) +
             u.value_at_s(sigma + m) * cut.zeta_s_deriv(sigma);
    };
    auto f0 = [&](double sigma) {
      return std::pow(std::abs(g_val(sigma)), p) * std::exp(sigma);
    };
    auto f1 = [&](double sigma) {
      return std::pow(std::abs(g_deriv(sigma)), p) * std::exp((1.0 - p) * sigma);
    };
    const double part = gauss_legendre_signsplit(f0, g_val, -w, w, cells) +
                        gauss_legendre_signsplit(f1, g_deriv, -w, w, cells);
    total += std::exp(static_cast<double>(m) * spec.theta) * part;
  }
  return std::pow(total, 1.0 / p);
}

HardyReport hardy_check(const SampledFunction& u, const NormSpec& spec,
                        double tol) {
  spec.validate();
  const auto& v = u.values();
  double vmax = 0.0;
  for (double x : v) vmax = std::max(vmax, std::abs(x));
  if (vmax == 0.0) return HardyReport{0.0, 0.0, 0.0, true};
  if (std::abs(v.front()) > kSupportTol * vmax ||
      std::abs(v.back()) > kSupportTol * vmax) {
    fail(ErrorKind::SupportError, "support touches the grid boundary");
  }
  const LogGrid& g = u.grid();
  const double p = spec.p;
  const double theta = spec.theta;
  SampledFunction du(g, u.log_derivative_values(), u.interp());

  double lhs_int = 0.0;
  double rhs_int = 0.0;
  for (int j = 0; j + 1 < g.n; ++j) {
    const double s0 = g.s(j);
    const double s1 = g.s(j + 1);
    auto fl = [&](double s) {
      return std::pow(std::abs(u.value_at_s(s)), p) * std::exp(theta * s);
    };
    auto fr = [&](double s) {
      const double uv = std::abs(u.value_at_s(s));
      const double dv = du.value_at_s(s);
      double factor;
      if (p >= 2.0) {
        factor = std::pow(uv, p - 2.0);
      } else {
        factor = std::pow(std::max(uv, 1e-30), p - 2.0);
      }
      return factor * dv * dv * std::exp(theta * s);
    };
    auto sgn = [&](double s) { return u.value_at_s(s); };
    lhs_int += gauss_legendre_signsplit(fl, sgn, s0, s1, 1);
    rhs_int += gauss_legendre_signsplit(fr, sgn, s0, s1, 1);
  }
  HardyReport rep;
  rep.lhs = (theta * theta) / (p * p) * lhs_int;
  rep.rhs = rhs_int;
  rep.slack = rep.rhs - rep.lhs;
  rep.holds = rep.lhs <= rep.rhs * (1.0 + tol);
  return rep;
}

double TimeWeight::operator()(double t) const {
  if (kind == TimeWeightKind::ConstantOne) return 1.0;
  return std::pow(std::abs(t), a);
}

TimeWeight power_time_weight(double a) {
  if (!(a > -1.0) || !std::isfinite(a)) {
    fail(ErrorKind::InvalidSpec, "power weight needs a > -1");
  }
  return TimeWeight{TimeWeightKind::Power, a};
}

namespace {

// signed antiderivative of |t|^a: sign(t) |t|^{a+1}/(a+1)
double power_weight_anti(double a, double t) {
  const double m = std::abs(t);
  if (m == 0.0) return 0.0;
  const double v = std::pow(m, a + 1.0) / (a + 1.0);
  return t < 0.0 ? -v : v;
}

}  // namespace

double weight_integral(const TimeWeight& w, double t0, double t1) {
  if (t1 < t0) std::swap(t0, t1);
  if (w.kind == TimeWeightKind::ConstantOne) return t1 - t0;
  return power_weight_anti(w.a, t1) - power_weight_anti(w.a, t0);
}

namespace {

// average of |t|^{a} over (lo, hi); +inf when divergent (a <= -1 touching 0)
double power_average(double a, double lo, double hi) {
  const double len = hi - lo;
  if (a == 0.0) return 1.0;
  if (a <= -1.0) {
    const bool touches_zero = lo <= 0.0 && hi >= 0.0;
    if (touches_zero || lo == 0.0 || hi == 0.0) {
      return std::numeric_limits<double>::infinity();
    }
    if (lo < 0.0 && hi <= 0.0) return power_average(a, -hi, -lo);
    // 0 < lo < hi
    double val;
    if (std::abs(a + 1.0) < 1e-14) {
      val = std::log(hi) - std::log(lo);
    } else {
      val = (std::pow(hi, a + 1.0) - std::pow(lo, a + 1.0)) / (a + 1.0);
    }
    return val / len;
  }
  return (power_weight_anti(a, hi) - power_weight_anti(a, lo)) / len;
}

double ap_candidate(const TimeWeight& w, double p, double lo, double hi) {
  if (w.kind == TimeWeightKind::ConstantOne) return 1.0;
  const double mean = power_average(w.a, lo, hi);
  const double dual = power_average(w.a / (1.0 - p), lo, hi);
  if (!std::isfinite(mean) || !std::isfinite(dual)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return mean * std::pow(dual, p - 1.0);
}

}  // namespace

double ap_constant_estimate(const TimeWeight& w, double p, long resolution) {
  if (!(p > 1.0) || !std::isfinite(p)) fail(ErrorKind::InvalidSpec, "need p > 1");
  if (resolution < 16) fail(ErrorKind::InvalidSpec, "need resolution >= 16");
  if (w.kind == TimeWeightKind::ConstantOne) return 1.0;
  // round down to a power of two so families nest for any resolution increase
  long rounded = 16;
  while (rounded * 2 <= resolution) rounded *= 2;
  resolution = rounded;
  double best = 0.0;
  auto consider = [&](double lo, double hi) {
    const double c = ap_candidate(w, p, lo, hi);
    if (std::isfinite(c)) best = std::max(best, c);
  };
  for (int j = -8; j <= 8; ++j) {
    const double L = std::ldexp(1.0, j);
    consider(0.0, L);
    consider(-L, 0.0);
    consider(-0.5 * L, 0.5 * L);
    for (double frac = 1.0 / static_cast<double>(resolution); frac <= 1.0;
         frac *= 2.0) {
      const double d = L * frac;
      consider(d, d + L);        // offset right of the singularity
      consider(-d - L, -d);      // mirrored
      consider(-d, L - d);       // straddling with left part d
    }
  }
  return best;
}

}  // namespace degenlab
