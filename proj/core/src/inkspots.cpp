#include "degenlab/inkspots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace degenlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_gamma(double gamma) {
  if (!(gamma > 0.0) || !(gamma < 1.0)) {
    fail(ErrorKind::InvalidSpec, "density level must lie in (0, 1)");
  }
}

}  // namespace

IntervalSet::IntervalSet(std::vector<std::pair<double, double>> intervals)
    : ivs_(std::move(intervals)) {
  for (std::size_t i = 0; i < ivs_.size(); ++i) {
    if (!std::isfinite(ivs_[i].first) || !std::isfinite(ivs_[i].second) ||
        !(ivs_[i].first < ivs_[i].second)) {
      fail(ErrorKind::InvalidSpec, "intervals need finite endpoints with a < b");
    }
    if (i > 0 && !(ivs_[i - 1].second <= ivs_[i].first)) {
      fail(ErrorKind::InvalidSpec, "intervals must be sorted and disjoint");
    }
  }
}

IntervalSet IntervalSet::from_unsorted(
    std::vector<std::pair<double, double>> intervals) {
  std::vector<std::pair<double, double>> kept;
  for (const auto& iv : intervals) {
    if (!std::isfinite(iv.first) || !std::isfinite(iv.second)) {
      fail(ErrorKind::InvalidSpec, "intervals need finite endpoints");
    }
    if (iv.first < iv.second) kept.push_back(iv);
  }
  std::sort(kept.begin(), kept.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& iv : kept) {
    if (!merged.empty() && iv.first <= merged.back().second) {
      merged.back().second = std::max(merged.back().second, iv.second);
    } else {
      merged.push_back(iv);
    }
  }
  IntervalSet out;
  out.ivs_ = std::move(merged);
  return out;
}

double IntervalSet::length() const {
  double acc = 0.0;
  for (const auto& iv : ivs_) acc += iv.second - iv.first;
  return acc;
}

std::pair<double, double> IntervalSet::hull() const {
  if (ivs_.empty()) return {kInf, -kInf};
  return {ivs_.front().first, ivs_.back().second};
}

double IntervalSet::intersect_length(double lo, double hi) const {
  double acc = 0.0;
  for (const auto& iv : ivs_) {
    const double a = std::max(lo, iv.first);
    const double b = std::min(hi, iv.second);
    if (b > a) acc += b - a;
  }
  return acc;
}

IntervalSet IntervalSet::intersect(double lo, double hi) const {
  std::vector<std::pair<double, double>> out;
  for (const auto& iv : ivs_) {
    const double a = std::max(lo, iv.first);
    const double b = std::min(hi, iv.second);
    if (b > a) out.emplace_back(a, b);
  }
  IntervalSet s;
  s.ivs_ = std::move(out);
  return s;
}

IntervalSet IntervalSet::setminus(const IntervalSet& other) const {
  std::vector<std::pair<double, double>> out;
  for (const auto& iv : ivs_) {
    double cursor = iv.first;
    for (const auto& cut : other.ivs_) {
      if (cut.second <= cursor) continue;
      if (cut.first >= iv.second) break;
      if (cut.first > cursor) out.emplace_back(cursor, cut.first);
      cursor = std::max(cursor, cut.second);
      if (cursor >= iv.second) break;
    }
    if (cursor < iv.second) out.emplace_back(cursor, iv.second);
  }
  IntervalSet s;
  s.ivs_ = std::move(out);
  return s;
}

IntervalSet IntervalSet::unite(const IntervalSet& other) const {
  std::vector<std::pair<double, double>> all = ivs_;
  all.insert(all.end(), other.ivs_.begin(), other.ivs_.end());
  return from_unsorted(std::move(all));
}

double IntervalSet::weighted_length(const TimeWeight& w) const {
  double acc = 0.0;
  for (const auto& iv : ivs_) acc += weight_integral(w, iv.first, iv.second);
  return acc;
}

double density(const IntervalSet& E, double t, double r) {
  if (!(r > 0.0) || !std::isfinite(r) || !std::isfinite(t)) {
    fail(ErrorKind::DomainError, "density needs a finite center and r > 0");
  }
  return E.intersect_length(t - r, t + r) / (2.0 * r);
}

double critical_radius(const IntervalSet& E, double t, double gamma) {
  check_gamma(gamma);
  if (!std::isfinite(t)) fail(ErrorKind::DomainError, "center must be finite");
  if (E.empty()) fail(ErrorKind::NoCriticalRadius, "empty set has no density");

  std::vector<double> events{0.0};
  for (const auto& iv : E.intervals()) {
    events.push_back(std::abs(iv.first - t));
    events.push_back(std::abs(iv.second - t));
  }
  std::sort(events.begin(), events.end());
  events.erase(std::unique(events.begin(), events.end()), events.end());

  auto mass = [&](double r) { return E.intersect_length(t - r, t + r); };
  auto g = [&](double r) { return mass(r) - 2.0 * gamma * r; };

  // beyond the last kink the mass is constant |E|
  const double r_max = events.back();
  const double r_tail = E.length() / (2.0 * gamma);
  if (r_tail >= r_max && r_tail > 0.0) return r_tail;

  for (std::size_t k = events.size() - 1; k-- > 0;) {
    const double r0 = events[k], r1 = events[k + 1];
    const double g0 = g(r0), g1 = g(r1);
    if (g1 == 0.0 && r1 > 0.0) return r1;
    if ((g0 > 0.0 && g1 < 0.0) || (g0 < 0.0 && g1 > 0.0)) {
      return r0 + (r1 - r0) * g0 / (g0 - g1);
    }
    if (g0 == 0.0 && r0 > 0.0) return r0;
  }
  fail(ErrorKind::NoCriticalRadius, "density level is never attained");
}

CoverSelection select_cover(const IntervalSet& E, double gamma) {
  check_gamma(gamma);
  CoverSelection out;
  out.gamma = gamma;
  const double total = E.length();
  if (total == 0.0) return out;

  const double target = 1e-6 * total;
  const double radius_floor = 1e-9 * total;
  IntervalSet uncovered = E;

  auto disjoint_from_selected = [&](double t, double r) {
    for (const auto& cyl : out.cylinders) {
      if (t - r < cyl.first + cyl.second && cyl.first - cyl.second < t + r) {
        return false;
      }
    }
    return true;
  };

  for (int round = 0; round < 200; ++round) {
    std::vector<double> centers;
    for (const auto& iv : uncovered.intervals()) {
      centers.push_back(iv.first);
      centers.push_back(0.5 * (iv.first + iv.second));
      centers.push_back(iv.second);
    }
    std::sort(centers.begin(), centers.end());
    centers.erase(std::unique(centers.begin(), centers.end()), centers.end());

    std::vector<std::pair<double, double>> candidates;  // (radius, center)
    for (double t : centers) {
      try {
        const double r = critical_radius(E, t, gamma);
        if (r >= radius_floor) candidates.emplace_back(r, t);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NoCriticalRadius) throw;
      }
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });

    bool progress = false;
    for (const auto& [r, t] : candidates) {
      if (!disjoint_from_selected(t, r)) continue;
      out.cylinders.emplace_back(t, r);
      const double d = out.dilation * r;
      uncovered = uncovered.setminus(
          IntervalSet({{t - d, t + d}}));
      progress = true;
    }
    out.rounds = round + 1;
    out.residual = uncovered.length();
    if (out.residual <= target) return out;
    if (!progress) break;
  }
  fail(ErrorKind::CoverageShortfall,
       "greedy selection left an uncovered residual above tolerance");
}

HypothesisResult hypothesis_check(const IntervalSet& E, const IntervalSet& F,
                                  double gamma, double T, int resolution) {
  check_gamma(gamma);
  if (resolution < 8) fail(ErrorKind::InvalidSpec, "resolution must be >= 8");
  HypothesisResult out;
  out.holds = true;
  if (E.empty()) return out;

  std::vector<double> centers;
  for (const auto* set : {&E, &F}) {
    for (const auto& iv : set->intervals()) {
      centers.push_back(iv.first);
      centers.push_back(0.5 * (iv.first + iv.second));
      centers.push_back(iv.second);
      if (iv.first <= T && T < iv.second) {
        centers.push_back(T);
        centers.push_back(0.5 * (iv.first + T));
      }
    }
  }
  centers.erase(std::remove_if(centers.begin(), centers.end(),
                               [&](double t) { return t > T; }),
                centers.end());
  std::sort(centers.begin(), centers.end());
  centers.erase(std::unique(centers.begin(), centers.end()), centers.end());

  const auto hull_e = E.hull();
  const auto hull_f = F.empty() ? hull_e : F.hull();
  const double span = std::max(hull_e.second, hull_f.second) -
                      std::min(hull_e.first, hull_f.first);
  const double r_hi = 2.0 * std::max(span, 1e-12);
  const double r_lo = 1e-6 * r_hi;

  auto violated = [&](double t, double R) {
    if (density(E, t, R) < gamma - 1e-12) return false;
    const double hi = std::min(t + R, T);
    if (!(hi > t - R)) return false;
    IntervalSet inside({{t - R, hi}});
    const double escaped = inside.setminus(F).length();
    return escaped > 1e-12 * std::max(R, 1.0);
  };

  for (double t : centers) {
    std::vector<double> radii;
    for (const auto* set : {&E, &F}) {
      for (const auto& iv : set->intervals()) {
        if (iv.first <= t && t <= iv.second) {
          double r = 0.5 * (iv.second - iv.first);
          for (int k = 0; k < 20 && r > r_lo; ++k, r *= 0.5) radii.push_back(r);
        }
      }
    }
    try {
      radii.push_back(critical_radius(E, t, gamma));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NoCriticalRadius) throw;
    }
    for (int j = 0; j < resolution; ++j) {
      radii.push_back(r_lo * std::pow(r_hi / r_lo,
                                      static_cast<double>(j) / (resolution - 1)));
    }
    for (double R : radii) {
      if (!(R > 0.0)) continue;
      if (violated(t, R)) {
        out.holds = false;
        out.has_witness = true;
        out.t = t;
        out.R = R;
        return out;
      }
    }
  }
  return out;
}

LemmaReport ink_spots_bound(const IntervalSet& E, const IntervalSet& F,
                            double gamma, const TimeWeight& w, double p,
                            double T) {
  check_gamma(gamma);
  if (!(p > 1.0)) fail(ErrorKind::InvalidSpec, "need p > 1");

  LemmaReport report;
  report.p = p;
  const HypothesisResult hyp = hypothesis_check(E, F, gamma, T);
  report.hypothesis_holds = hyp.holds;
  report.witness = hyp;
  if (!hyp.holds) {
    std::ostringstream msg;
    msg << "covering hypothesis fails at t = " << hyp.t << ", R = " << hyp.R;
    fail(ErrorKind::HypothesisViolated, msg.str());
  }
  report.wE = E.weighted_length(w);
  report.wF = F.weighted_length(w);
  report.ap_constant = ap_constant_estimate(w, p, 1024);
  if (w.kind == TimeWeightKind::ConstantOne) {
    report.delta = 1.0;
  } else {
    report.delta = measure_comparison_check(w, p).delta;
  }
  report.bound_rhs = std::pow(10.0, p) * report.ap_constant * report.ap_constant *
                     std::pow(gamma, report.delta) * report.wF;
  report.conclusion_holds = report.wE <= report.bound_rhs * (1.0 + 1e-12);
  return report;
}

DoublingReport doubling_check(const TimeWeight& w, double p, int radii) {
  if (!(p > 1.0)) fail(ErrorKind::InvalidSpec, "need p > 1");
  if (radii < 4) fail(ErrorKind::InvalidSpec, "need at least four radii");

  DoublingReport report;
  const double est_coarse = ap_constant_estimate(w, p, 256);
  const double est_fine = ap_constant_estimate(w, p, 4096);
  report.ap_constant = est_coarse;
  if (!(est_fine <= 10.0 * est_coarse)) {
    report.applicable = false;
    return report;
  }

  const double centers[] = {0.0, 0.5, -0.5, 1.0, -1.0, 2.0, -2.0, 4.0, -4.0,
                            8.0, -8.0};
  for (double t : centers) {
    const double base = weight_integral(w, t - 1.0, t + 1.0);
    for (int j = 1; j <= radii; ++j) {
      const double R = std::pow(2.0, 10.0 * j / radii);
      const double grown = weight_integral(w, t - R, t + R);
      const double ratio =
          grown / (std::pow(R, p) * est_coarse * base);
      if (ratio > report.worst_ratio) {
        report.worst_ratio = ratio;
        report.witness_t = t;
        report.witness_R = R;
      }
    }
  }
  report.holds = report.worst_ratio <= 1.0 + 1e-9;
  return report;
}

MeasureComparisonReport measure_comparison_check(const TimeWeight& w, double p,
                                                 std::uint64_t seed,
                                                 int samples) {
  if (!(p > 1.0)) fail(ErrorKind::InvalidSpec, "need p > 1");
  if (samples < 10) fail(ErrorKind::InvalidSpec, "need at least ten samples");

  std::mt19937_64 rng(seed);
  auto unif = [&]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
  };

  struct Draw {
    double rm = 0.0;
    double rw = 0.0;
  };
  auto draw_one = [&]() -> Draw {
    for (int attempt = 0; attempt < 64; ++attempt) {
      const double t = -4.0 + 8.0 * unif();
      const double R = std::exp(std::log(1e-2) +
                                std::log(1e3) * unif());
      const int k = 1 + static_cast<int>(rng() % 4);
      std::vector<double> pts(2 * k);
      for (double& v : pts) v = t - R + 2.0 * R * unif();
      std::sort(pts.begin(), pts.end());
      std::vector<std::pair<double, double>> sub;
      for (int i = 0; i < k; ++i) {
        if (pts[2 * i] < pts[2 * i + 1]) sub.emplace_back(pts[2 * i], pts[2 * i + 1]);
      }
      if (sub.empty()) continue;
      const IntervalSet e = IntervalSet::from_unsorted(std::move(sub));
      const double wc = weight_integral(w, t - R, t + R);
      if (!(wc > 0.0) || !std::isfinite(wc)) continue;
      Draw d;
      d.rm = e.length() / (2.0 * R);
      d.rw = e.weighted_length(w) / wc;
      if (d.rm > 0.0 && d.rm < 1.0 && d.rw > 0.0 && d.rw <= 1.0) return d;
    }
    fail(ErrorKind::QuadratureError, "sample rejection loop failed to converge");
  };

  MeasureComparisonReport report;
  report.samples = samples;
  const int pilot = samples / 2;
  std::vector<Draw> pilot_draws(pilot);
  for (auto& d : pilot_draws) d = draw_one();

  if (w.kind == TimeWeightKind::ConstantOne) {
    report.N = 1.0;
    report.delta = 1.0;
  } else {
    double delta_min = 1.0;
    for (const auto& d : pilot_draws) {
      delta_min = std::min(delta_min, std::log(d.rw) / std::log(d.rm));
    }
    report.delta = std::max(0.05, 0.9 * delta_min);
    double need = 1.0;
    for (const auto& d : pilot_draws) {
      need = std::max(need, std::pow(d.rm, p) / d.rw);
      need = std::max(need, d.rw / std::pow(d.rm, report.delta));
    }
    report.N = 1.1 * need;
  }

  for (int i = pilot; i < samples; ++i) {
    const Draw d = draw_one();
    report.worst_lower = std::max(report.worst_lower, std::pow(d.rm, p) / d.rw);
    report.worst_upper =
        std::max(report.worst_upper, d.rw / std::pow(d.rm, report.delta));
  }
  report.holds = report.worst_lower <= report.N * (1.0 + 1e-9) &&
                 report.worst_upper <= report.N * (1.0 + 1e-9);
  return report;
}

}  // namespace degenlab
