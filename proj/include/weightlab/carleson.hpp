#pragma once

// The eta density on the upper half-plane, the Carleson box functional
// A(x0, t) = (1/t) int_0^t int_{I(x0,t)} eta(x, y) dx dy / y, its sweep
// suprema, the telescoped decomposition of A into four terms, and the
// three-way vanishing check.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "weightlab/errors.hpp"
#include "weightlab/interval.hpp"
#include "weightlab/muckenhoupt.hpp"
#include "weightlab/oscillation.hpp"
#include "weightlab/sweep.hpp"
#include "weightlab/weight.hpp"

namespace weightlab {

/// log(AM / GM) of two half masses, written as 0.5 log1p((1-r)^2 / 4r) so the
/// result is >= 0 in floating point.
inline double eta_from_halves(double left_mass, double right_mass) {
  if (!(left_mass > 0.0 && right_mass > 0.0)) throw degenerate_weight_error("zero half-mass");
  const double r = right_mass / left_mass;
  const double d = ratio_gap(r);
  return 0.5 * std::log1p(d * d / (4.0 * r));
}

inline double eta(const Weight& w, const BoxPoint& z) {
  return eta_from_halves(w.mass(z.left()), w.mass(z.right()));
}

inline double eta_tilde(const Weight& w, const BoxPoint& z) {
  return half_ratio_deviation(w.mass(z.left()), w.mass(z.right()));
}

/// Range of eta-tilde / eta over tested boxes with eta > 0, with the largest
/// doubling ratio seen. Both functions are (1 - r)^2 / 8 to leading order,
/// so the band sits around 8 and widens with the doubling ratio.
struct ComparabilityBand {
  double lower = std::numeric_limits<double>::infinity();
  double upper = 0.0;
  double doubling = 1.0;
  std::size_t boxes = 0;
};

inline ComparabilityBand comparability_band(const Weight& w, const std::vector<double>& scales,
                                            const SweepPolicy& policy = {}) {
  ComparabilityBand b;
  for (double d : scales) {
    for_each_interval(w.domain(), d, policy, [&](const Interval& Iz) {
      const double m = Iz.midpoint();
      const double l = w.mass(Iz.lo(), m), r = w.mass(m, Iz.hi());
      const double e = eta_from_halves(l, r);
      if (!(e > 1e-14)) return;
      const double q = half_ratio_deviation(l, r) / e;
      b.lower = std::min(b.lower, q);
      b.upper = std::max(b.upper, q);
      b.doubling = std::max(b.doubling, std::max(l / r, r / l));
      ++b.boxes;
    });
  }
  return b;
}

/// Lazily evaluated eta and eta-tilde over box points of one weight.
/// `at(x, half)` is the unchecked fast path used by quadrature loops: the box
/// centred at x with half-intervals of length `half`. It returns NaN when a
/// half carries no mass.
class EtaField {
 public:
  explicit EtaField(const Weight& w) : w_(&w) {}

  double eta(const BoxPoint& z) const { return weightlab::eta(*w_, z); }
  double eta_tilde(const BoxPoint& z) const { return weightlab::eta_tilde(*w_, z); }

  double at(double x, double half) const {
    double a, b;
    if (const auto* s = w_->sampled()) {
      // prefix differences would lose the relative precision of tiny halves
      a = s->mass(x - half, x);
      b = s->mass(x, x + half);
    } else {
      const double f1 = w_->antiderivative(x);
      a = f1 - w_->antiderivative(x - half);
      b = w_->antiderivative(x + half) - f1;
    }
    if (!(a > 0.0 && b > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    const double r = b / a;
    const double d = ratio_gap(r);
    return 0.5 * std::log1p(d * d / (4.0 * r));
  }

  const Weight& weight() const noexcept { return *w_; }

 private:
  const Weight* w_;
};

/// Tensor midpoint rule per dyadic layer: heights y in [t/2^k, t/2^(k-1)] for
/// k = 1..depth, x_panels nodes across I(x0, t), y_panels nodes per layer.
struct BoxQuadrature {
  int depth = 12;
  int x_panels = 64;
  int y_panels = 16;

  BoxQuadrature refined() const { return {depth, 2 * x_panels, 2 * y_panels}; }
};

/// Coarser rule used for sweeps over many boxes.
inline constexpr BoxQuadrature sweep_box_quadrature{8, 16, 4};

struct BoxFunctional {
  double value;
  std::vector<double> layers;  ///< contribution of layer k = 1..depth
  double tail_estimate;        ///< geometric extrapolation of the omitted layers (inf if layers do not decay)
  int skipped;                 ///< nodes skipped for a massless half
  BoxQuadrature quadrature;
};

namespace detail {

inline void require_box(const Weight& w, double x0, double t) {
  if (!(t > 0.0)) throw argument_error("box functional: t must be > 0");
  w.require_inside(x0 - t, x0 + t);
}

inline double geometric_tail(const std::vector<double>& layers) {
  if (layers.empty()) return 0.0;
  const double last = layers.back();
  if (last == 0.0) return 0.0;
  if (layers.size() < 2) return std::numeric_limits<double>::infinity();
  const double q = last / layers[layers.size() - 2];
  if (!(q >= 0.0 && q < 1.0)) return std::numeric_limits<double>::infinity();
  return last * q / (1.0 - q);
}

}  // namespace detail

/// A(x0, t) truncated at height t / 2^depth, in the change-of-variables form:
/// layer k integrates eta at half-width y / 2^k for y in [t/2, t].
inline BoxFunctional box_functional(const Weight& w, double x0, double t,
                                    const BoxQuadrature& q = {}) {
  if (q.depth < 1 || q.x_panels < 1 || q.y_panels < 1)
    throw argument_error("box_functional: bad quadrature");
  detail::require_box(w, x0, t);
  const EtaField field(w);
  BoxFunctional out{0.0, {}, 0.0, 0, q};
  const double hx = t / q.x_panels;
  const double hy = 0.5 * t / q.y_panels;
  const double xa = x0 - 0.5 * t;
  for (int k = 1; k <= q.depth; ++k) {
    const double shrink = std::ldexp(1.0, -k);
    double layer = 0.0;
    for (int j = 0; j < q.y_panels; ++j) {
      const double y = 0.5 * t + (j + 0.5) * hy;
      const double half = y * shrink;
      double row = 0.0;
      for (int i = 0; i < q.x_panels; ++i) {
        const double e = field.at(xa + (i + 0.5) * hx, half);
        if (std::isnan(e)) {
          ++out.skipped;
          continue;
        }
        row += e;
      }
      layer += row / y;
    }
    layer *= hx * hy / t;
    out.layers.push_back(layer);
    out.value += layer;
  }
  out.tail_estimate = detail::geometric_tail(out.layers);
  return out;
}

struct BoxWitness {
  double x0;
  double t;
};

struct CarlesonReport {
  double norm_sq;  ///< largest box functional over every tested box
  std::optional<BoxWitness> witness;
  OscillationProfile modulus;  ///< witnesses are I(x0, t)
  int skipped = 0;
  BoxQuadrature quadrature;
};

/// Box functionals over boxes I(x0, t), t in `scales`, centres on a t/8
/// lattice with [x0 - t, x0 + t] inside the domain.
inline CarlesonReport carleson_report(const Weight& w, const std::vector<double>& scales,
                                      const BoxQuadrature& q = sweep_box_quadrature,
                                      int step_divisor = 8) {
  require_decreasing(scales);
  CarlesonReport rep{0.0, std::nullopt, {}, 0, q};
  rep.modulus.floor = 0.0;
  for (double t : scales) {
    ArgMax<Interval> best;
    if (2.0 * t <= w.domain().length()) {
      for_each_translate(w.domain(), 2.0 * t, 2 * step_divisor, [&](const Interval& outer) {
        const double x0 = outer.midpoint();
        const auto b = box_functional(w, x0, t, q);
        rep.skipped += b.skipped;
        best.offer(b.value, Interval::centered(x0, t), interval_key());
      });
    }
    rep.modulus.entries.push_back(
        {t, best.empty() ? 0.0 : best.value, best.witness, best.diverged});
    if (!best.empty() && (!rep.witness || best.value > rep.norm_sq)) {
      rep.norm_sq = best.value;
      rep.witness = BoxWitness{best.witness->midpoint(), t};
    }
  }
  accumulate_from_small_scales(rep.modulus.entries);
  return rep;
}

// --- decomposition ---------------------------------------------------------

struct DecompositionDiagnostics {
  double x0, t;
  int N;
  double A_total;  ///< box functional at depth N
  double A1_hat, A2_hat, A3, A4;
  double residual;  ///< |A_total - (A1_hat - A2_hat + A3 + A4)|
  BoxQuadrature quadrature;
};

/// Evaluates the telescoped split of the depth-N box functional:
///   A1_hat  integral of log(w_{I(x,y)} / w_I) dx dy / (t y)
///   A2_hat  integral of the mean of log(w(x - y/2^N, x) / (y/2^N)) and
///           log(w(x, x + y/2^N) / (y/2^N)), minus (log w)_I
///   A3      sum over k < N of the log ratio of the centred interval of
///           length y/2^k to the geometric mean of its two neighbours
///   A4      log 2 (log w_I - (log w)_I), exact
/// All quadratures share the nodes of box_functional, so the residual is the
/// midpoint error of the measure dx dy / (t y), which has total mass log 2.
inline DecompositionDiagnostics decomposition_diagnostics(const Weight& w, double x0, double t,
                                                          int N, BoxQuadrature q = {}) {
  if (N < 1) throw argument_error("decomposition_diagnostics: N must be >= 1");
  q.depth = N;
  detail::require_box(w, x0, t);
  const Interval I = Interval::centered(x0, t);
  const double avg = w.mass(I) / t;
  const double log_avg = w.log_integral(I.lo(), I.hi()) / t;
  if (!(avg > 0.0) || !std::isfinite(log_avg))
    throw degenerate_weight_error("decomposition_diagnostics: degenerate averages");

  auto F = [&w](double x) { return w.antiderivative(x); };
  const double hx = t / q.x_panels;
  const double hy = 0.5 * t / q.y_panels;
  double a1 = 0.0, a2 = 0.0, a3 = 0.0;
  for (int j = 0; j < q.y_panels; ++j) {
    const double y = 0.5 * t + (j + 0.5) * hy;
    const double wt = hx * hy / (t * y);
    const double sN = std::ldexp(y, -N);
    for (int i = 0; i < q.x_panels; ++i) {
      const double x = I.lo() + (i + 0.5) * hx;
      const double fx = F(x);
      const double m1 = F(x + 0.5 * y) - F(x - 0.5 * y);
      a1 += wt * std::log((m1 / y) / avg);
      const double lN = fx - F(x - sN), rN = F(x + sN) - fx;
      a2 += wt * (0.5 * (std::log(lN / sN) + std::log(rN / sN)) - log_avg);
      for (int k = 1; k < N; ++k) {
        const double s = std::ldexp(y, -k);
        const double centred = F(x + 0.5 * s) - F(x - 0.5 * s);
        const double l = fx - F(x - s), r = F(x + s) - fx;
        a3 += wt * (std::log(centred) - 0.5 * (std::log(l) + std::log(r)));
      }
    }
  }
  DecompositionDiagnostics d{x0, t, N, box_functional(w, x0, t, q).value, a1, a2, a3,
                             std::numbers::ln2 * (std::log(avg) - log_avg), 0.0, q};
  d.residual = std::abs(d.A_total - (d.A1_hat - d.A2_hat + d.A3 + d.A4));
  return d;
}

// --- layer bound -----------------------------------------------------------

/// Worst adjacent equal-length mass ratio deviation max(r, 1/r) - 1 over
/// pairs of lengths max_len * 2^(-j/2), j = 0..2*levels, with shared points
/// on a length/8 lattice inside `region`.
inline double measured_epsilon(const Weight& w, const Interval& region, double max_len,
                               int levels = 10) {
  double worst = 0.0;
  for (int j = 0; j <= 2 * levels; ++j) {
    const double s = max_len * std::exp2(-0.5 * j);
    if (2.0 * s > region.length()) continue;
    for_each_translate(region, 2.0 * s, 16, [&](const Interval& J) {
      const double m = J.midpoint();
      const double a = w.mass(J.lo(), m), b = w.mass(m, J.hi());
      if (!(a > 0.0 && b > 0.0)) throw degenerate_weight_error("measured_epsilon: zero mass");
      worst = std::max(worst, std::max(a / b, b / a) - 1.0);
    });
  }
  return worst;
}

struct LayerBound {
  int k;
  double max_ratio;  ///< max over y in [t/2, t] of |F_k(y)| / y
  double bound;      ///< 2^-(k-1) epsilon'
};

struct LayerBoundReport {
  double epsilon_prime;
  std::vector<LayerBound> layers;
  bool passed;
};

/// F_k(y) = integral over I(x0, t) of log(w(I(x, y/2^k)) / sqrt(w(x - y/2^k, x) w(x, x + y/2^k))) dx,
/// checked against 2^-(k-1) epsilon' for k = 1..kmax, epsilon' measured on
/// [x0 - t, x0 + t] over lengths <= t.
inline LayerBoundReport layer_bound_check(const Weight& w, double x0, double t, int kmax,
                                          const BoxQuadrature& q = {}) {
  detail::require_box(w, x0, t);
  LayerBoundReport rep{measured_epsilon(w, Interval(x0 - t, x0 + t), t, kmax + 2), {}, true};
  auto F = [&w](double x) { return w.antiderivative(x); };
  const Interval I = Interval::centered(x0, t);
  const double hx = t / q.x_panels;
  for (int k = 1; k <= kmax; ++k) {
    double worst = 0.0;
    for (int j = 0; j < q.y_panels; ++j) {
      const double y = 0.5 * t + (j + 0.5) * 0.5 * t / q.y_panels;
      const double s = std::ldexp(y, -k);
      double fk = 0.0;
      for (int i = 0; i < q.x_panels; ++i) {
        const double x = I.lo() + (i + 0.5) * hx;
        const double fx = F(x);
        const double centred = F(x + 0.5 * s) - F(x - 0.5 * s);
        fk += std::log(centred) - 0.5 * (std::log(fx - F(x - s)) + std::log(F(x + s) - fx));
      }
      worst = std::max(worst, std::abs(fk * hx) / y);
    }
    const double bound = std::ldexp(rep.epsilon_prime, -(k - 1));
    rep.layers.push_back({k, worst, bound});
    if (!(worst <= bound)) rep.passed = false;
  }
  return rep;
}

// --- three-way check -------------------------------------------------------

enum class ModulusClass { vanishing, non_vanishing, inconclusive };

inline const char* to_string(ModulusClass c) noexcept {
  switch (c) {
    case ModulusClass::vanishing: return "vanishing";
    case ModulusClass::non_vanishing: return "non-vanishing";
    case ModulusClass::inconclusive: return "inconclusive";
  }
  return "?";
}

/// Thresholds on v = value - floor:
///   vanishing      v at the smallest scale <= 1e-12, or < 0.02 with a
///                  decrease by a factor >= 4 from the largest scale
///   non-vanishing  v >= 0.05 at every scale
inline constexpr double vanish_threshold = 0.02;
inline constexpr double persist_threshold = 0.05;
inline constexpr double decay_factor = 4.0;

inline ModulusClass classify(const OscillationProfile& p) {
  if (p.entries.empty()) return ModulusClass::inconclusive;
  const double small = p.smallest_scale().value - p.floor;
  const double large = p.largest_scale().value - p.floor;
  if (small <= 1e-12 || (small < vanish_threshold && large >= decay_factor * small))
    return ModulusClass::vanishing;
  const bool persists = std::all_of(p.entries.begin(), p.entries.end(), [&](const ProfileEntry& e) {
    return e.value - p.floor >= persist_threshold;
  });
  return persists ? ModulusClass::non_vanishing : ModulusClass::inconclusive;
}

struct TheoremVerdict {
  bool screen_passed;  ///< A_infinity screen (finite reverse-Jensen constant)
  std::optional<AinftyReport> ainfty;
  OscillationProfile vmo;       ///< mean oscillation of log w
  OscillationProfile mitsis;    ///< reverse-Jensen ratio, floor 1
  OscillationProfile carleson;  ///< box functional modulus
  OscillationProfile doubling;  ///< lambda_delta
  ModulusClass mitsis_class = ModulusClass::inconclusive;
  ModulusClass carleson_class = ModulusClass::inconclusive;
  ModulusClass doubling_class = ModulusClass::inconclusive;
  bool consistent = false;  ///< all three vanish or all three persist
};

inline TheoremVerdict theorem_check(const Weight& w, const std::vector<double>& scales,
                                    const BoxQuadrature& q = sweep_box_quadrature,
                                    const SweepPolicy& policy = {}) {
  require_decreasing(scales);
  TheoremVerdict v{};
  v.ainfty = ainfty_constant(w, IntervalSweep::from_scales(w.domain(), scales, policy));
  v.screen_passed = !v.ainfty->diverged && std::isfinite(v.ainfty->constant);
  if (!v.screen_passed) return v;
  v.vmo = vmo_modulus(LogWeight(w), w.domain(), scales, policy);
  v.mitsis = mitsis_modulus(w, scales, policy);
  v.carleson = carleson_report(w, scales, q, policy.step_divisor).modulus;
  v.doubling = vanishing_doubling_modulus(w, scales, policy);
  v.mitsis_class = classify(v.mitsis);
  v.carleson_class = classify(v.carleson);
  v.doubling_class = classify(v.doubling);
  v.consistent = v.mitsis_class == v.carleson_class && v.carleson_class == v.doubling_class &&
                 v.mitsis_class != ModulusClass::inconclusive;
  return v;
}

}  // namespace weightlab
