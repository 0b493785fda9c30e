#pragma once

// Truncated cones, the area function A_t(x)^2 = int_{Gamma_t(x)} eta du dy / y^2,
// its average over I, and the integration-by-parts split
//   (A_t^2)_I = B1 + B21 + B22 + B3 + 2 A(x0, t).
// Every y-integral is truncated at y_min = t / 2^depth; the split is exact
// on [y_min, t], so identity_residual measures quadrature error only.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "weightlab/carleson.hpp"
#include "weightlab/errors.hpp"
#include "weightlab/interval.hpp"
#include "weightlab/sweep.hpp"
#include "weightlab/weight.hpp"

namespace weightlab {

/// Cone {(u, y) : |u - x| < y, 0 < y < height}.
struct ConeSpec {
  double vertex;
  double height;

  ConeSpec(double x, double t) : vertex(x), height(t) {
    if (!(t > 0.0)) throw argument_error("cone height must be > 0");
  }
  /// Cross-section at height y.
  Interval section(double y) const { return Interval(vertex - y, vertex + y); }
};

/// Midpoint rules for cone integrals: dyadic layers in y as for the box
/// functional, u_panels across each cross-section, x_panels across I.
struct AreaQuadrature {
  int depth = 8;
  int x_panels = 16;
  int y_panels = 8;
  int u_panels = 16;

  AreaQuadrature refined() const { return {depth, 2 * x_panels, 2 * y_panels, 2 * u_panels}; }
};

inline constexpr AreaQuadrature sweep_area_quadrature{8, 8, 4, 8};

namespace detail {

// Calls fn(y, hy) for midpoints of every layer [t/2^k, t/2^(k-1)], k = 1..depth.
template <class Fn>
void for_each_layer_node(double t, int depth, int y_panels, Fn&& fn) {
  for (int k = 1; k <= depth; ++k) {
    const double lo = std::ldexp(t, -k);
    const double hy = lo / y_panels;
    for (int j = 0; j < y_panels; ++j) fn(lo + (j + 0.5) * hy, hy);
  }
}

// Midpoint integral of eta(u, y) over u in (x - y, x + y).
inline double section_integral(const EtaField& field, double x, double y, int panels) {
  const double hu = 2.0 * y / panels;
  double s = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double e = field.at(x - y + (i + 0.5) * hu, 0.5 * y);
    if (!std::isnan(e)) s += e;
  }
  return s * hu;
}

inline double eta_or_zero(const EtaField& field, double u, double y) {
  const double e = field.at(u, 0.5 * y);
  return std::isnan(e) ? 0.0 : e;
}

}  // namespace detail

/// A_t(x), truncated at t / 2^depth.
inline double area_function(const Weight& w, double x, double t, const AreaQuadrature& q = {}) {
  const ConeSpec cone(x, t);
  w.require_inside(x - 1.5 * cone.height, x + 1.5 * cone.height);
  const EtaField field(w);
  double s = 0.0;
  detail::for_each_layer_node(t, q.depth, q.y_panels, [&](double y, double hy) {
    s += detail::section_integral(field, x, y, q.u_panels) * hy / (y * y);
  });
  return std::sqrt(s);
}

/// (A_t^2)_I alone, for sweeps.
inline double area_square_direct(const Weight& w, const Interval& I, const AreaQuadrature& q) {
  const double t = I.length();
  w.require_inside(I.lo() - 1.5 * t, I.hi() + 1.5 * t);
  const EtaField field(w);
  const double hx = t / q.x_panels;
  double s = 0.0;
  for (int i = 0; i < q.x_panels; ++i) {
    const double x = I.lo() + (i + 0.5) * hx;
    detail::for_each_layer_node(t, q.depth, q.y_panels, [&](double y, double hy) {
      s += detail::section_integral(field, x, y, q.u_panels) * hy / (y * y);
    });
  }
  return s * hx / t;
}

struct AreaReport {
  Interval interval;
  double area_square;  ///< (A_t^2)_I
  double box_average;  ///< A(x0, t) = (1/t) int int eta dx dy / y (the identity uses 2x this)
  double B1, B21, B22, B3;
  double identity_residual;  ///< |(A_t^2)_I - (B1 + B21 + B22 + B3 + 2 box_average)|
  double epsilon_prime;      ///< measured adjacent-ratio deviation near I at lengths <= |I|
  double bounded_ratio;      ///< max of int_{x-y}^{x+y} w(u +- y/2) / w(half interval) du
  double y_min;              ///< truncation height
  AreaQuadrature quadrature;

  /// |B| <= 2 epsilon' for each of the four terms.
  bool b_bounds_hold() const {
    const double b = 2.0 * epsilon_prime;
    return std::abs(B1) <= b && std::abs(B21) <= b && std::abs(B22) <= b && std::abs(B3) <= b;
  }
};

inline AreaReport area_square_average(const Weight& w, const Interval& I,
                                      const AreaQuadrature& q = {}) {
  const double t = I.length();
  const double x0 = I.midpoint();
  w.require_inside(x0 - 2.05 * t, x0 + 2.05 * t);
  const EtaField field(w);
  const double hx = t / q.x_panels;
  const double y_min = std::ldexp(t, -q.depth);

  double direct = 0, b1 = 0, b21 = 0, b22 = 0, b3 = 0, box = 0, ratio = 0;
  auto ratio_integral = [&](double x, double y) {
    // int_{x-y}^{x+y} w(u + y/2) / w(u, u + y/2) du and its mirror.
    const double hu = 2.0 * y / q.u_panels;
    double right = 0.0, left = 0.0;
    for (int i = 0; i < q.u_panels; ++i) {
      const double u = x - y + (i + 0.5) * hu;
      right += w.density(u + 0.5 * y) / w.unchecked_mass(u, u + 0.5 * y);
      left += w.density(u - 0.5 * y) / w.unchecked_mass(u - 0.5 * y, u);
    }
    return std::max(right, left) * hu;
  };

  for (int i = 0; i < q.x_panels; ++i) {
    const double x = I.lo() + (i + 0.5) * hx;
    b1 += -detail::section_integral(field, x, t, q.u_panels) / t +
          detail::section_integral(field, x, y_min, q.u_panels) / y_min;
    detail::for_each_layer_node(t, q.depth, q.y_panels, [&](double y, double hy) {
      const double g = detail::section_integral(field, x, y, q.u_panels);
      direct += g * hy / (y * y);
      const double e0 = detail::eta_or_zero(field, x, y);
      b21 += (detail::eta_or_zero(field, x + y, y) - e0) * hy / y;
      b22 += (detail::eta_or_zero(field, x - y, y) - e0) * hy / y;
      box += e0 * hy / y;
      // d eta / dy by central differences with step y/64, integrated over the section.
      const double h = y / 64.0;
      const double hu = 2.0 * y / q.u_panels;
      double dsum = 0.0;
      for (int k = 0; k < q.u_panels; ++k) {
        const double u = x - y + (k + 0.5) * hu;
        dsum += (detail::eta_or_zero(field, u, y + h) - detail::eta_or_zero(field, u, y - h)) /
                (2.0 * h);
      }
      b3 += dsum * hu * hy / y;
      ratio = std::max(ratio, ratio_integral(x, y));
    });
  }
  const double scale = hx / t;
  AreaReport r{I,
               direct * scale,
               box * scale,
               b1 * scale,
               b21 * scale,
               b22 * scale,
               b3 * scale,
               0.0,
               measured_epsilon(w, Interval(x0 - 2.0 * t, x0 + 2.0 * t), t, q.depth),
               ratio,
               y_min,
               q};
  r.identity_residual =
      std::abs(r.area_square - (r.B1 + r.B21 + r.B22 + r.B3 + 2.0 * r.box_average));
  return r;
}

struct ConeBoxReport {
  OscillationProfile area;      ///< sup of (A_t^2)_I over tested |I| = t <= delta
  OscillationProfile carleson;  ///< box functional modulus
  ModulusClass area_class;
  ModulusClass carleson_class;
  bool agree;  ///< both vanish or both persist
};

inline ConeBoxReport cone_box_equivalence(const Weight& w, const std::vector<double>& scales,
                                          const AreaQuadrature& aq = sweep_area_quadrature,
                                          const BoxQuadrature& bq = sweep_box_quadrature,
                                          int step_divisor = 8) {
  require_decreasing(scales);
  ConeBoxReport rep{};
  rep.area.floor = 0.0;
  for (double t : scales) {
    ArgMax<Interval> best;
    for_each_center(w.domain(), 2.05 * t, t / step_divisor, [&](double x0) {
      const Interval I = Interval::centered(x0, t);
      best.offer(area_square_direct(w, I, aq), I, interval_key());
    });
    rep.area.entries.push_back({t, best.empty() ? 0.0 : best.value, best.witness, best.diverged});
  }
  accumulate_from_small_scales(rep.area.entries);
  rep.carleson = carleson_report(w, scales, bq, step_divisor).modulus;
  rep.area_class = classify(rep.area);
  rep.carleson_class = classify(rep.carleson);
  rep.agree = rep.area_class == rep.carleson_class && rep.area_class != ModulusClass::inconclusive;
  return rep;
}

}  // namespace weightlab
