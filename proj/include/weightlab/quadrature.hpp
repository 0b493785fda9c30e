#pragma once

#include <array>
#include <cmath>
#include <utility>

namespace weightlab::quad {

/// 8-point Gauss-Legendre rule on [-1, 1] (positive nodes; the rule is symmetric).
inline constexpr std::array<std::pair<double, double>, 4> gauss_legendre_8{{
    {0.1834346424956498049394761, 0.3626837833783619829651504},
    {0.5255324099163289858177390, 0.3137066458778872873379622},
    {0.7966664774136267395915539, 0.2223810344533744705443560},
    {0.9602898564975362316835609, 0.1012285362903762591525314},
}};

/// Integral of `f` over [a, b] with one 8-point Gauss-Legendre panel.
template <class F>
double gauss8(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double s = 0.0;
  for (const auto& [x, w] : gauss_legendre_8) s += w * (f(c - h * x) + f(c + h * x));
  return s * h;
}

/// Composite midpoint rule: calls f(x) at the midpoints of `panels` equal
/// sub-intervals of [a, b] and returns the weighted sum.
template <class F>
double midpoint(F&& f, double a, double b, int panels) {
  const double h = (b - a) / panels;
  double s = 0.0;
  for (int i = 0; i < panels; ++i) s += f(a + (i + 0.5) * h);
  return s * h;
}

/// Quintic Hermite interpolant on one panel of width h, t in [0, 1], matching
/// value, first and second derivative at both ends.
inline double quintic_hermite(double t, double h, double f0, double d0, double s0, double f1,
                              double d1, double s1) noexcept {
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double t4 = t3 * t;
  const double t5 = t4 * t;
  const double h0 = 1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5;
  const double h1 = t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5;
  const double h2 = 0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5);
  const double h3 = 0.5 * (t3 - 2.0 * t4 + t5);
  const double h4 = -4.0 * t3 + 7.0 * t4 - 3.0 * t5;
  const double h5 = 10.0 * t3 - 15.0 * t4 + 6.0 * t5;
  return f0 * h0 + h * d0 * h1 + h * h * s0 * h2 + h * h * s1 * h3 + h * d1 * h4 + f1 * h5;
}

}  // namespace weightlab::quad
