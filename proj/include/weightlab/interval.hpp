#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "weightlab/errors.hpp"

namespace weightlab {

/// Bounded open interval (lo, hi) with lo < hi.
class Interval {
 public:
  Interval(double lo, double hi) : lo_(lo), hi_(hi) {
    if (!(std::isfinite(lo) && std::isfinite(hi)) || !(lo < hi))
      throw argument_error("interval requires finite lo < hi, got (" + std::to_string(lo) + ", " +
                           std::to_string(hi) + ")");
  }

  /// Interval of length `length` centred at `center`.
  static Interval centered(double center, double length) {
    return Interval(center - 0.5 * length, center + 0.5 * length);
  }

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double length() const noexcept { return hi_ - lo_; }
  double midpoint() const noexcept { return 0.5 * (lo_ + hi_); }

  Interval left_half() const { return Interval(lo_, midpoint()); }
  Interval right_half() const { return Interval(midpoint(), hi_); }

  bool contains(double x) const noexcept { return lo_ <= x && x <= hi_; }
  bool contains(const Interval& other) const noexcept {
    return lo_ <= other.lo_ && other.hi_ <= hi_;
  }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double lo_;
  double hi_;
};

/// Point z = (x, y) of the upper half-plane. Its interval I_z is centred at x
/// with length y; I_z^- and I_z^+ are the left and right halves.
struct BoxPoint {
  double x;
  double y;

  BoxPoint(double x_, double y_) : x(x_), y(y_) {
    if (!(y_ > 0.0) || !std::isfinite(x_) || !std::isfinite(y_))
      throw argument_error("box point needs finite x and y > 0");
  }

  Interval interval() const { return Interval::centered(x, y); }
  Interval left() const { return Interval(x - 0.5 * y, x); }
  Interval right() const { return Interval(x, x + 0.5 * y); }

  friend bool operator==(const BoxPoint&, const BoxPoint&) = default;
};

/// Uniform cell grid over a domain.
struct GridSpec {
  Interval domain;
  std::size_t cells;

  GridSpec(Interval d, std::size_t n) : domain(d), cells(n) {
    if (n == 0) throw argument_error("grid needs at least one cell");
  }

  double cell_width() const noexcept { return domain.length() / static_cast<double>(cells); }
  double cell_lo(std::size_t k) const noexcept {
    return domain.lo() + static_cast<double>(k) * cell_width();
  }
  double cell_mid(std::size_t k) const noexcept {
    return domain.lo() + (static_cast<double>(k) + 0.5) * cell_width();
  }
};

/// Dyadic tiling of the Carleson box over `I`: level k = 1..depth holds 2^k
/// boxes of height |I|/2^k whose intervals tile I. Levels are emitted in
/// order, left to right within a level.
inline std::vector<BoxPoint> dyadic_boxes(const Interval& I, int depth) {
  if (depth < 1) throw argument_error("dyadic_boxes: depth must be >= 1");
  if (depth > 30) throw argument_error("dyadic_boxes: depth too large");
  std::vector<BoxPoint> out;
  out.reserve((std::size_t{1} << (depth + 1)) - 2);
  for (int k = 1; k <= depth; ++k) {
    const std::size_t count = std::size_t{1} << k;
    const double h = I.length() / static_cast<double>(count);
    for (std::size_t j = 0; j < count; ++j)
      out.emplace_back(I.lo() + (static_cast<double>(j) + 0.5) * h, h);
  }
  return out;
}

}  // namespace weightlab
