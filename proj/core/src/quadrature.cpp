#include "degenlab/quadrature.hpp"

#include <array>
#include <cmath>

#include "degenlab/errors.hpp"

namespace degenlab {

namespace {

// 6-point Gauss-Legendre on [-1, 1]
constexpr std::array<double, 6> kNodes = {
    -0.9324695142031520, -0.6612093864662645, -0.2386191860831969,
    0.2386191860831969,  0.6612093864662645,  0.9324695142031520};
constexpr std::array<double, 6> kWeights = {
    0.1713244923791704, 0.3607615730481386, 0.4679139345726910,
    0.4679139345726910, 0.3607615730481386, 0.1713244923791704};

double gl_cell(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t k = 0; k < kNodes.size(); ++k) {
    acc += kWeights[k] * f(mid + half * kNodes[k]);
  }
  return acc * half;
}

}  // namespace

double gauss_legendre(const std::function<double(double)>& f, double a, double b,
                      int cells) {
  if (!(b > a)) return 0.0;
  if (cells < 1) cells = 1;
  const double h = (b - a) / static_cast<double>(cells);
  double acc = 0.0;
  for (int i = 0; i < cells; ++i) {
    acc += gl_cell(f, a + i * h, a + (i + 1) * h);
  }
  return acc;
}

double gauss_legendre_signsplit(const std::function<double(double)>& f,
                                const std::function<double(double)>& sign,
                                double a, double b, int cells) {
  if (!(b > a)) return 0.0;
  if (cells < 1) cells = 1;
  const double h = (b - a) / static_cast<double>(cells);
  double acc = 0.0;
  for (int i = 0; i < cells; ++i) {
    double lo = a + i * h;
    double hi = a + (i + 1) * h;
    double slo = sign(lo);
    const double shi = sign(hi);
    if (slo == 0.0 || shi == 0.0 || (slo > 0.0) == (shi > 0.0)) {
      acc += gl_cell(f, lo, hi);
      continue;
    }
    // bisect the crossing so |g|^p stays smooth on each side
    double left = lo, right = hi;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (left + right);
      const double smid = sign(mid);
      if (smid == 0.0) {
        left = right = mid;
        break;
      }
      if ((smid > 0.0) == (slo > 0.0)) {
        left = mid;
        slo = smid;
      } else {
        right = mid;
      }
    }
    const double cross = 0.5 * (left + right);
    acc += gl_cell(f, lo, cross) + gl_cell(f, cross, hi);
  }
  return acc;
}

double exp_integral(double kappa, double s0, double s1) {
  // centered form: e^{kappa c} * 2d * sinh(z)/z with z = kappa d
  const double c = 0.5 * (s0 + s1);
  const double d = 0.5 * (s1 - s0);
  const double z = kappa * d;
  double sinc;
  if (std::abs(z) < 1e-3) {
    const double z2 = z * z;
    sinc = 1.0 + z2 / 6.0 + z2 * z2 / 120.0;
  } else {
    sinc = std::sinh(z) / z;
  }
  return std::exp(kappa * c) * 2.0 * d * sinc;
}

double exp_linear_integral(double kappa, double s0, double s1, double A, double B) {
  if (B == 0.0) return A * exp_integral(kappa, s0, s1);
  // center at c so the odd part stays cancellation-free for small kappa*d
  const double c = 0.5 * (s0 + s1);
  const double d = 0.5 * (s1 - s0);
  const double Ac = A + B * c;
  const double z = kappa * d;
  double even;  // integral of e^{kappa u} over [-d, d]
  double odd;   // integral of u e^{kappa u} over [-d, d]
  if (std::abs(z) < 1e-3) {
    const double z2 = z * z;
    even = 2.0 * d * (1.0 + z2 / 6.0 + z2 * z2 / 120.0);
    odd = (2.0 / 3.0) * d * d * d * kappa * (1.0 + z2 / 10.0 + z2 * z2 / 280.0);
  } else {
    even = 2.0 * std::sinh(z) / kappa;
    odd = 2.0 * (z * std::cosh(z) - std::sinh(z)) / (kappa * kappa);
  }
  return std::exp(kappa * c) * (Ac * even + B * odd);
}

double adaptive_integral(const std::function<double(double)>& f, double a, double b,
                         double rel_tol, double abs_floor, int max_doublings) {
  int cells = 8;
  double prev = gauss_legendre(f, a, b, cells);
  for (int k = 0; k < max_doublings; ++k) {
    cells *= 2;
    const double cur = gauss_legendre(f, a, b, cells);
    const double scale = std::max(std::abs(cur), abs_floor);
    if (std::abs(cur - prev) <= rel_tol * scale) return cur;
    prev = cur;
  }
  fail(ErrorKind::QuadratureError, "adaptive integration did not settle");
}

}  // namespace degenlab
