#include "degenlab/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace degenlab {

namespace {

// antiderivative of y^mu at y > 0: y^{mu+1}/(mu+1), or log y when mu = -1
double power_antiderivative(double mu, double y) {
  if (std::abs(mu + 1.0) < 1e-14) return std::log(y);
  return std::pow(y, mu + 1.0) / (mu + 1.0);
}

}  // namespace

double PowerPiece::eval(double x) const {
  double acc = 0.0;
  for (const auto& t : terms) acc += t.coef * std::pow(x, t.exponent);
  return acc;
}

PowerPiecewise::PowerPiecewise(std::vector<PowerPiece> pieces)
    : pieces_(std::move(pieces)) {
  std::sort(pieces_.begin(), pieces_.end(),
            [](const PowerPiece& a, const PowerPiece& b) { return a.lo < b.lo; });
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& p = pieces_[i];
    if (!(p.lo >= 0.0) || !(p.hi > p.lo) || !std::isfinite(p.hi)) {
      fail(ErrorKind::InvalidSpec, "piece needs 0 <= lo < hi < inf");
    }
    for (const auto& t : p.terms) {
      if (!std::isfinite(t.coef) || !std::isfinite(t.exponent)) {
        fail(ErrorKind::InvalidSpec, "non-finite piece term");
      }
    }
    if (i > 0 && p.lo < pieces_[i - 1].hi - 1e-15 * std::abs(pieces_[i - 1].hi)) {
      fail(ErrorKind::InvalidSpec, "pieces overlap");
    }
  }
  // drop empty pieces
  std::erase_if(pieces_, [](const PowerPiece& p) { return p.terms.empty(); });
}

PowerPiecewise PowerPiecewise::indicator(double lo, double hi, double value) {
  return power(lo, hi, value, 0.0);
}

PowerPiecewise PowerPiecewise::power(double lo, double hi, double coef,
                                     double exponent) {
  if (coef == 0.0) return PowerPiecewise{};
  return PowerPiecewise({PowerPiece{lo, hi, {PowerTerm{coef, exponent}}}});
}

PowerPiecewise PowerPiecewise::polynomial(double lo, double hi,
                                          const std::vector<double>& coeffs) {
  PowerPiece piece{lo, hi, {}};
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] != 0.0) {
      piece.terms.push_back(PowerTerm{coeffs[k], static_cast<double>(k)});
    }
  }
  if (piece.terms.empty()) return PowerPiecewise{};
  return PowerPiecewise({std::move(piece)});
}

double PowerPiecewise::operator()(double x) const {
  for (const auto& p : pieces_) {
    if (x > p.lo && x < p.hi) return p.eval(x);
    if (x <= p.lo) break;
  }
  return 0.0;
}

double PowerPiecewise::support_lo() const {
  if (pieces_.empty()) return std::numeric_limits<double>::infinity();
  return pieces_.front().lo;
}

double PowerPiecewise::support_hi() const {
  if (pieces_.empty()) return -std::numeric_limits<double>::infinity();
  return pieces_.back().hi;
}

PowerPiecewise PowerPiecewise::scaled(double c) const {
  if (c == 0.0) return PowerPiecewise{};
  std::vector<PowerPiece> out = pieces_;
  for (auto& p : out) {
    for (auto& t : p.terms) t.coef *= c;
  }
  return PowerPiecewise(std::move(out));
}

PowerPiecewise PowerPiecewise::power_shifted(double gamma) const {
  std::vector<PowerPiece> out = pieces_;
  for (auto& p : out) {
    for (auto& t : p.terms) t.exponent += gamma;
  }
  return PowerPiecewise(std::move(out));
}

PowerPiecewise PowerPiecewise::dilated(double factor) const {
  if (!(factor > 0.0)) fail(ErrorKind::DomainError, "dilation factor must be positive");
  std::vector<PowerPiece> out = pieces_;
  for (auto& p : out) {
    p.lo /= factor;
    p.hi /= factor;
    for (auto& t : p.terms) t.coef *= std::pow(factor, t.exponent);
  }
  return PowerPiecewise(std::move(out));
}

PowerPiecewise PowerPiecewise::plus(const PowerPiecewise& other) const {
  if (pieces_.empty()) return other;
  if (other.pieces_.empty()) return *this;
  // merge at the union of breakpoints
  std::vector<double> cuts;
  for (const auto& p : pieces_) {
    cuts.push_back(p.lo);
    cuts.push_back(p.hi);
  }
  for (const auto& p : other.pieces_) {
    cuts.push_back(p.lo);
    cuts.push_back(p.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-15 * (1.0 + std::abs(a)); }),
             cuts.end());

  auto terms_on = [](const std::vector<PowerPiece>& pieces, double lo, double hi)
      -> const std::vector<PowerTerm>* {
    const double mid = 0.5 * (lo + hi);
    for (const auto& p : pieces) {
      if (mid > p.lo && mid < p.hi) return &p.terms;
    }
    return nullptr;
  };

  std::vector<PowerPiece> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    std::map<double, double> merged;  // exponent -> coefficient
    if (const auto* t = terms_on(pieces_, lo, hi)) {
      for (const auto& term : *t) merged[term.exponent] += term.coef;
    }
    if (const auto* t = terms_on(other.pieces_, lo, hi)) {
      for (const auto& term : *t) merged[term.exponent] += term.coef;
    }
    PowerPiece piece{lo, hi, {}};
    for (const auto& [e, c] : merged) {
      if (c != 0.0) piece.terms.push_back(PowerTerm{c, e});
    }
    if (!piece.terms.empty()) out.push_back(std::move(piece));
  }
  return PowerPiecewise(std::move(out));
}

double PowerPiecewise::integral_power_prefix(double mu, double X) const {
  if (!(X > 0.0)) return 0.0;
  double acc = 0.0;
  for (const auto& p : pieces_) {
    if (X <= p.lo) break;
    const double hi = std::min(X, p.hi);
    for (const auto& t : p.terms) {
      const double e = mu + t.exponent;
      acc += t.coef * (power_antiderivative(e, hi) - power_antiderivative(e, p.lo));
    }
  }
  return acc;
}

double PowerPiecewise::integral_power_full(double mu) const {
  if (pieces_.empty()) return 0.0;
  return integral_power_prefix(mu, pieces_.back().hi);
}

std::vector<double> PowerPiecewise::breakpoints() const {
  std::vector<double> cuts;
  for (const auto& p : pieces_) {
    cuts.push_back(p.lo);
    cuts.push_back(p.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

}  // namespace degenlab
