#pragma once

// Mean oscillation, BMO/VMO estimates, John-Nirenberg tails and the two
// limit functionals (A_2 product and reverse-Jensen ratio) for u = log w.

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <optional>
#include <span>
#include <vector>

#include "weightlab/errors.hpp"
#include "weightlab/interval.hpp"
#include "weightlab/sweep.hpp"
#include "weightlab/weight.hpp"

namespace weightlab {

/// A real function on the line that can be integrated exactly and split into
/// pieces on which u - level has constant sign.
///   value(x)            point value
///   integral(a, b)      integral over [a, b]
///   cuts(a, b, levels, out)
///       appends the points of (a, b) where u crosses any level, jumps, or is
///       singular
template <class U>
concept ScalarField = requires(const U& u, double a, double b, std::span<const double> levels,
                               std::vector<double>& out) {
  { u.value(a) } -> std::convertible_to<double>;
  { u.integral(a, b) } -> std::convertible_to<double>;
  u.cuts(a, b, levels, out);
};

/// u = log w.
class LogWeight {
 public:
  explicit LogWeight(const Weight& w) : w_(&w) {}
  double value(double x) const { return w_->log_density(x); }
  double integral(double a, double b) const { return w_->log_integral(a, b); }
  void cuts(double a, double b, std::span<const double> levels, std::vector<double>& out) const {
    w_->log_cuts(a, b, levels, out);
  }
  const Weight& weight() const noexcept { return *w_; }

 private:
  const Weight* w_;
};

/// u + c.
template <ScalarField U>
class Shifted {
 public:
  Shifted(U u, double c) : u_(std::move(u)), c_(c) {}
  double value(double x) const { return u_.value(x) + c_; }
  double integral(double a, double b) const { return u_.integral(a, b) + c_ * (b - a); }
  void cuts(double a, double b, std::span<const double> levels, std::vector<double>& out) const {
    std::vector<double> shifted(levels.begin(), levels.end());
    for (double& l : shifted) l -= c_;
    u_.cuts(a, b, shifted, out);
  }

 private:
  U u_;
  double c_;
};

namespace detail {

// Sorted piece boundaries of I for the given levels, endpoints included.
template <ScalarField U>
std::vector<double> pieces(const U& u, const Interval& I, std::span<const double> levels) {
  std::vector<double> pts;
  pts.push_back(I.lo());
  u.cuts(I.lo(), I.hi(), levels, pts);
  pts.push_back(I.hi());
  std::sort(pts.begin() + 1, pts.end() - 1);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace detail

/// u_I.
template <ScalarField U>
double interval_mean(const U& u, const Interval& I) {
  const double m = u.integral(I.lo(), I.hi()) / I.length();
  if (!std::isfinite(m)) throw evaluation_error("interval_mean: non-finite integral");
  return m;
}

/// (1/|I|) * integral over I of |u - u_I|.
template <ScalarField U>
double mean_oscillation(const U& u, const Interval& I) {
  const double m = interval_mean(u, I);
  const std::array<double, 1> level{m};
  const auto pts = detail::pieces(u, I, level);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = pts[i], b = pts[i + 1];
    total += std::abs(u.integral(a, b) - m * (b - a));
  }
  if (!std::isfinite(total)) throw evaluation_error("mean_oscillation: non-finite integral");
  return total / I.length();
}

struct SupremumEstimate {
  double value;
  Interval witness;
};

/// Largest mean oscillation over the sweep; a lower bound for the BMO norm
/// on the sweep's window.
template <ScalarField U>
SupremumEstimate bmo_norm_estimate(const U& u, const IntervalSweep& sweep) {
  ArgMax<Interval> best;
  sweep.for_each([&](const Interval& I) { best.offer(mean_oscillation(u, I), I, interval_key()); });
  if (best.empty()) throw argument_error("bmo_norm_estimate: empty sweep");
  return {best.value, *best.witness};
}

/// Per-scale suprema of `functional(I)` under the sweep policy, accumulated
/// so that entry delta covers every tested interval with |I| <= delta.
template <class Functional>
OscillationProfile scale_profile(const Interval& window, const std::vector<double>& scales,
                                 const SweepPolicy& policy, double floor, Functional&& functional) {
  require_decreasing(scales);
  OscillationProfile p;
  p.floor = floor;
  for (double d : scales) {
    ArgMax<Interval> best;
    for_each_interval(window, d, policy,
                      [&](const Interval& I) { best.offer(functional(I), I, interval_key()); });
    ProfileEntry e{d, best.empty() ? floor : best.value, best.witness, best.diverged};
    p.entries.push_back(e);
  }
  accumulate_from_small_scales(p.entries);
  return p;
}

/// v(delta) = sup of mean oscillation over tested |I| <= delta.
template <ScalarField U>
OscillationProfile vmo_modulus(const U& u, const Interval& window,
                               const std::vector<double>& scales, const SweepPolicy& policy = {}) {
  return scale_profile(window, scales, policy, 0.0,
                       [&](const Interval& I) { return mean_oscillation(u, I); });
}

/// Empirical John-Nirenberg tail on one interval.
struct JNTail {
  Interval interval;
  std::vector<double> lambdas;
  std::vector<double> tail_fractions;
  double bmo_norm_used;
  /// Fitted (C1, C2); empty when fewer than two tail values fall in the fit range.
  std::optional<double> fitted_C1;
  std::optional<double> fitted_C2;
  /// True when the fit gives C2 > 0 and tail <= C1 exp(-C2 lambda / norm) on
  /// every lambda.
  bool holds = false;
};

/// Tail fractions |{t in I : |u(t) - u_I| >= lambda}| / |I|. C2 comes from a
/// least-squares line through log(tail) for tails in [1e-6, 0.5]; C1 is then
/// the smallest constant making the bound an envelope of every positive tail.
template <ScalarField U>
JNTail jn_tail(const U& u, const Interval& I, std::vector<double> lambdas, double bmo_norm) {
  if (!(bmo_norm > 0.0)) throw argument_error("jn_tail: bmo norm must be > 0");
  if (!std::is_sorted(lambdas.begin(), lambdas.end()))
    throw argument_error("jn_tail: lambdas must be increasing");
  const double m = interval_mean(u, I);
  JNTail out{I, lambdas, {}, bmo_norm, std::nullopt, std::nullopt, false};
  for (double lam : lambdas) {
    const std::array<double, 2> levels{m - lam, m + lam};
    const auto pts = detail::pieces(u, I, levels);
    double hit = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
      const double a = pts[i], b = pts[i + 1];
      if (std::abs(u.value(0.5 * (a + b)) - m) >= lam) hit += b - a;
    }
    out.tail_fractions.push_back(std::clamp(hit / I.length(), 0.0, 1.0));
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    const double tf = out.tail_fractions[k];
    if (lambdas[k] > 0.0 && tf >= 1e-6 && tf <= 0.5) {
      const double x = lambdas[k], y = std::log(tf);
      sx += x, sy += y, sxx += x * x, sxy += x * y;
      ++n;
    }
  }
  const double det = n * sxx - sx * sx;
  if (n < 2 || !(det > 0.0)) return out;
  const double slope = (n * sxy - sx * sy) / det;
  const double c2 = -slope * bmo_norm;
  double c1 = 0.0;
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    const double tf = out.tail_fractions[k];
    if (lambdas[k] > 0.0 && tf > 0.0) c1 = std::max(c1, tf * std::exp(c2 * lambdas[k] / bmo_norm));
  }
  out.fitted_C1 = c1;
  out.fitted_C2 = c2;
  out.holds = c2 > 0.0 && std::isfinite(c1);
  return out;
}

/// A ratio functional value; `diverged` marks a non-integrable factor.
struct RatioValue {
  double value;
  bool diverged;
};

/// (w_I) * ((1/w)_I), given the reciprocal weight.
inline RatioValue sarason_product(const Weight& w, const Weight& reciprocal, const Interval& I) {
  const double a = w.mass(I) / I.length();
  const double b = reciprocal.mass(I) / I.length();
  if (!(a > 0.0)) throw degenerate_weight_error("sarason_product: zero mass");
  const double v = a * b;
  return {v, !std::isfinite(v)};
}

inline RatioValue sarason_product(const Weight& w, const Interval& I) {
  return sarason_product(w, w.powered(-1.0), I);
}

/// w_I * exp(-(log w)_I).
inline RatioValue mitsis_ratio(const Weight& w, const Interval& I) {
  const double avg = w.mass(I) / I.length();
  if (!(avg > 0.0)) throw degenerate_weight_error("mitsis_ratio: zero mass");
  const double log_avg = w.log_integral(I.lo(), I.hi()) / I.length();
  if (!std::isfinite(log_avg)) return {std::numeric_limits<double>::infinity(), true};
  // exp(log(avg) - log_avg) keeps precision when the ratio is near 1.
  const double v = std::exp(std::log(avg) - log_avg);
  return {v, !std::isfinite(v)};
}

inline OscillationProfile sarason_modulus(const Weight& w, const std::vector<double>& scales,
                                          const SweepPolicy& policy = {}) {
  const Weight inv = w.powered(-1.0);
  return scale_profile(w.domain(), scales, policy, 1.0, [&](const Interval& I) {
    const auto r = sarason_product(w, inv, I);
    return r.diverged ? std::numeric_limits<double>::infinity() : r.value;
  });
}

inline OscillationProfile mitsis_modulus(const Weight& w, const std::vector<double>& scales,
                                         const SweepPolicy& policy = {}) {
  return scale_profile(w.domain(), scales, policy, 1.0, [&](const Interval& I) {
    const auto r = mitsis_ratio(w, I);
    return r.diverged ? std::numeric_limits<double>::infinity() : r.value;
  });
}

}  // namespace weightlab
