#pragma once

// Doubling constants, the vanishing-doubling modulus lambda_delta, A_p and
// A_infinity constants, the mediant lemma checks and the lambda integral
// criterion.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "weightlab/errors.hpp"
#include "weightlab/interval.hpp"
#include "weightlab/oscillation.hpp"
#include "weightlab/sweep.hpp"
#include "weightlab/weight.hpp"

namespace weightlab {

/// Squared deviation of the half-mass ratio from 1: |1 - w(I+)/w(I-)|^2.
/// 1 - r, with |1 - r| <= 1e-10 read as 0: half masses of small boxes come
/// from differences of antiderivatives and do not resolve finer gaps.
inline double ratio_gap(double r) {
  const double d = 1.0 - r;
  return std::abs(d) <= 1e-10 ? 0.0 : d;
}

inline double half_ratio_deviation(double left_mass, double right_mass) {
  if (!(left_mass > 0.0 && right_mass > 0.0))
    throw degenerate_weight_error("zero half-mass");
  const double d = ratio_gap(right_mass / left_mass);
  return d * d;
}

/// Adjacent equal-length pairs (p - L, p), (p, p + L) for every L in
/// `lengths`, with the shared point p on a lattice of step L / step_divisor
/// anchored at the window's midpoint.
struct PairSweep {
  Interval window;
  std::vector<double> lengths;
  int step_divisor = 16;

  static PairSweep from_scales(const Interval& window, const std::vector<double>& scales,
                               const SweepPolicy& policy = {}) {
    PairSweep s{window, {}, 16};
    for (double d : scales)
      for (double f : policy.length_fractions) s.lengths.push_back(d * f);
    return s;
  }

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (double L : lengths) {
      for_each_center(window, L, L / step_divisor, [&](double p) {
        fn(Interval(std::max(window.lo(), p - L), p), Interval(p, std::min(p + L, window.hi())));
      });
    }
  }
};

struct DoublingReport {
  double constant;
  Interval left;
  Interval right;
};

/// Largest mass ratio (larger / smaller) over the adjacent pairs of the sweep.
inline DoublingReport doubling_constant(const Weight& w, const PairSweep& sweep) {
  std::optional<DoublingReport> best;
  sweep.for_each([&](const Interval& I, const Interval& J) {
    const double a = w.mass(I), b = w.mass(J);
    if (!(a > 0.0 && b > 0.0)) throw degenerate_weight_error("doubling_constant: zero mass");
    const double r = std::max(a / b, b / a);
    if (!best || r > best->constant) best = DoublingReport{r, I, J};
  });
  if (!best) throw argument_error("doubling_constant: empty sweep");
  return *best;
}

/// lambda_delta(w): sup of |1 - w(I_z+)/w(I_z-)|^2 over tested boxes with
/// height <= delta. Witness intervals are the I_z of the maximising box.
inline OscillationProfile vanishing_doubling_modulus(const Weight& w,
                                                     const std::vector<double>& scales,
                                                     const SweepPolicy& policy = {}) {
  return scale_profile(w.domain(), scales, policy, 0.0, [&](const Interval& Iz) {
    const double m = Iz.midpoint();
    return half_ratio_deviation(w.mass(Iz.lo(), m), w.mass(m, Iz.hi()));
  });
}

/// (w_I) ((w^{-1/(p-1)})_I)^{p-1}, given the powered reciprocal.
inline RatioValue ap_product(const Weight& w, const Weight& reciprocal_power, const Interval& I,
                             double p) {
  const double a = w.mass(I) / I.length();
  if (!(a > 0.0)) throw degenerate_weight_error("ap_product: zero mass");
  const double b = reciprocal_power.mass(I) / I.length();
  const double v = a * std::pow(b, p - 1.0);
  return {v, !std::isfinite(v)};
}

inline Weight ap_reciprocal(const Weight& w, double p) {
  if (!(p > 1.0)) throw argument_error("A_p needs p > 1");
  return w.powered(-1.0 / (p - 1.0));
}

inline RatioValue ap_product(const Weight& w, const Interval& I, double p) {
  return ap_product(w, ap_reciprocal(w, p), I, p);
}

struct ApReport {
  double p;
  double constant;
  Interval witness;
  bool diverged;
};

inline ApReport ap_constant(const Weight& w, double p, const IntervalSweep& sweep) {
  const Weight rp = ap_reciprocal(w, p);
  ArgMax<Interval> best;
  sweep.for_each([&](const Interval& I) {
    const auto r = ap_product(w, rp, I, p);
    best.offer(r.diverged ? std::numeric_limits<double>::infinity() : r.value, I, interval_key());
  });
  if (best.empty()) throw argument_error("ap_constant: empty sweep");
  return {p, best.value, *best.witness, best.diverged};
}

struct AinftyReport {
  double constant;
  Interval witness;
  bool diverged;
};

/// Reverse-Jensen constant: sup of w_I exp(-(log w)_I) over the sweep.
inline AinftyReport ainfty_constant(const Weight& w, const IntervalSweep& sweep) {
  ArgMax<Interval> best;
  sweep.for_each([&](const Interval& I) {
    const auto r = mitsis_ratio(w, I);
    best.offer(r.diverged ? std::numeric_limits<double>::infinity() : r.value, I, interval_key());
  });
  if (best.empty()) throw argument_error("ainfty_constant: empty sweep");
  return {best.value, *best.witness, best.diverged};
}

/// Heuristic A_infinity spot check: split I into `cells` equal cells and, for
/// k = 1..cells, report w(E_k)/w(I) where E_k is the union of the k heaviest
/// cells (|E_k|/|I| = k/cells). Not a search over all measurable sets.
struct CellConcentration {
  double length_fraction;
  double mass_fraction;
};

inline std::vector<CellConcentration> ainfty_cell_diagnostic(const Weight& w, const Interval& I,
                                                             int cells = 64) {
  if (cells < 1) throw argument_error("ainfty_cell_diagnostic: cells must be >= 1");
  std::vector<double> m(static_cast<std::size_t>(cells));
  const double h = I.length() / cells;
  for (int k = 0; k < cells; ++k) m[k] = w.mass(I.lo() + k * h, I.lo() + (k + 1) * h);
  const double total = w.mass(I);
  if (!(total > 0.0)) throw degenerate_weight_error("ainfty_cell_diagnostic: zero mass");
  std::sort(m.begin(), m.end(), std::greater<>());
  std::vector<CellConcentration> out;
  double acc = 0.0;
  for (int k = 0; k < cells; ++k) {
    acc += m[k];
    out.push_back({static_cast<double>(k + 1) / cells, acc / total});
  }
  return out;
}

// --- mediant lemma --------------------------------------------------------

enum class LemmaStatus { passed, violated, hypothesis_not_met };

inline const char* to_string(LemmaStatus s) noexcept {
  switch (s) {
    case LemmaStatus::passed: return "passed";
    case LemmaStatus::violated: return "violated";
    case LemmaStatus::hypothesis_not_met: return "hypothesis-not-met";
  }
  return "?";
}

struct LemmaReport {
  LemmaStatus status;
  double epsilon;           ///< epsilon used for the bounds
  double measured_epsilon;  ///< worst adjacent-pair deviation found
  /// Part (a), m = 1..n: w(x0 - m t, x0 + m t) / w(x0 - t, x0 + t) and its bounds.
  std::vector<double> a_ratio, a_lower, a_upper;
  /// Part (b): positions x1 in (x0 - t, x0) and w(x1, x1 + t) / w(x0 - t, x0).
  std::vector<double> b_position, b_ratio;
  double min_margin_a;
  double min_margin_b;
};

/// Measures epsilon = max(r, 1/r) - 1 over every adjacent pair the lemma's
/// proof relies on, then checks (a) for m = 1..n and (b) at `b_positions`
/// points. With an override, the hypothesis fails when the measured epsilon
/// exceeds it. Margins are distances to the nearer bound (>= 0 means inside).
inline LemmaReport lemma_vanish_check(const Weight& w, double x0, double t, int n,
                                      std::optional<double> eps_override = std::nullopt,
                                      int b_positions = 64) {
  if (!(t > 0.0) || n < 1 || b_positions < 1)
    throw argument_error("lemma_vanish_check: need t > 0, n >= 1");
  w.require_inside(x0 - n * t, x0 + n * t);

  double worst = 0.0;
  auto pair = [&](double lo, double mid, double hi) {
    const double a = w.mass(lo, mid), b = w.mass(mid, hi);
    if (!(a > 0.0 && b > 0.0)) throw degenerate_weight_error("lemma_vanish_check: zero mass");
    worst = std::max(worst, std::max(a / b, b / a) - 1.0);
  };
  // Length-t pairs with shared points on a t/8 lattice spanning the chain.
  for (int j = -8 * (n - 1); j <= 8 * (n - 1); ++j) {
    const double p = x0 + j * t / 8.0;
    pair(p - t, p, p + t);
  }
  std::vector<double> xs;
  for (int i = 0; i < b_positions; ++i) {
    const double x1 = x0 - t + (i + 0.5) * t / b_positions;
    xs.push_back(x1);
    const double mid = 0.5 * (x0 + x1);
    pair(x0 - t, mid, x1 + t);
    pair(x1, mid, x0);
  }

  LemmaReport r{LemmaStatus::passed, worst, worst, {}, {}, {}, {}, {},
                std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  if (eps_override) {
    r.epsilon = *eps_override;
    if (worst > *eps_override) {
      r.status = LemmaStatus::hypothesis_not_met;
      return r;
    }
  }
  const double e = r.epsilon;
  const double base = w.mass(x0 - t, x0 + t);
  for (int m = 1; m <= n; ++m) {
    const double ratio = w.mass(x0 - m * t, x0 + m * t) / base;
    double upper, lower;
    if (e == 0.0) {
      upper = lower = m;
    } else {
      const double g = std::pow(1.0 + e, m);
      upper = (g - 1.0) / e;
      lower = upper / std::pow(1.0 + e, m - 1);
    }
    r.a_ratio.push_back(ratio);
    r.a_lower.push_back(lower);
    r.a_upper.push_back(upper);
    r.min_margin_a = std::min(r.min_margin_a, std::min(ratio - lower, upper - ratio));
  }
  const double left = w.mass(x0 - t, x0);
  for (double x1 : xs) {
    const double ratio = w.mass(x1, x1 + t) / left;
    r.b_position.push_back(x1);
    r.b_ratio.push_back(ratio);
    r.min_margin_b = std::min(r.min_margin_b, std::min(ratio - 1.0 / (1.0 + e), (1.0 + e) - ratio));
  }
  // Bounds computed in floating point; allow rounding-level slack.
  const double slack = 1e-12 * n;
  if (r.min_margin_a < -slack || r.min_margin_b < -slack) r.status = LemmaStatus::violated;
  return r;
}

// --- lambda integral criterion ---------------------------------------------

enum class Trend { converging, diverging, inconclusive };

inline const char* to_string(Trend t) noexcept {
  switch (t) {
    case Trend::converging: return "converging";
    case Trend::diverging: return "diverging";
    case Trend::inconclusive: return "inconclusive";
  }
  return "?";
}

struct LambdaCriterion {
  double estimate;  ///< trapezoid value of the integral of lambda_d / d over the computed range
  Trend trend;
  double tail_slope;  ///< d log(lambda) / d log(delta) over the last decade (NaN if undefined)
  OscillationProfile modulus;
};

/// Classification: lambda zero up to rounding (<= 1e-20) -> converging; tail slope > 0.1
/// -> converging; slope <= 0.1 with lambda >= 0.05 at the smallest scale ->
/// diverging; otherwise inconclusive.
inline LambdaCriterion lambda_integral_criterion(const Weight& w, double delta0,
                                                 const std::vector<double>& scales,
                                                 const SweepPolicy& policy = {}) {
  std::vector<double> used;
  for (double s : scales)
    if (s <= delta0 * (1.0 + 1e-12)) used.push_back(s);
  if (used.size() < 2) throw argument_error("lambda_integral_criterion: need >= 2 scales <= delta0");
  LambdaCriterion out{0.0, Trend::inconclusive, std::numeric_limits<double>::quiet_NaN(),
                      vanishing_doubling_modulus(w, used, policy)};
  const auto& e = out.modulus.entries;
  for (std::size_t i = 0; i + 1 < e.size(); ++i)
    out.estimate += 0.5 * (e[i].value + e[i + 1].value) * std::log(e[i].scale / e[i + 1].scale);

  // Rounding in the half masses of a flat weight leaves values near 1e-32.
  const bool all_zero =
      std::all_of(e.begin(), e.end(), [](const ProfileEntry& p) { return p.value <= 1e-20; });
  if (all_zero) {
    out.trend = Trend::converging;
    return out;
  }
  const double smallest = e.back().scale;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& p : e) {
    if (p.scale <= 10.0 * smallest * (1.0 + 1e-12) && p.value > 0.0) {
      const double x = std::log(p.scale), y = std::log(p.value);
      sx += x, sy += y, sxx += x * x, sxy += x * y;
      ++n;
    }
  }
  const double det = n * sxx - sx * sx;
  if (n >= 2 && det > 0.0) out.tail_slope = (n * sxy - sx * sy) / det;
  if (out.tail_slope > 0.1)
    out.trend = Trend::converging;
  else if (e.back().value >= 0.05 && !(out.tail_slope > 0.1))
    out.trend = Trend::diverging;
  return out;
}

}  // namespace weightlab
