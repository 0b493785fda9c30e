#pragma once

// Interval and box sweeps. A sweep is a finite family of test intervals;
// suprema over it are certified lower bounds for the supremum over all
// intervals of the window.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "weightlab/errors.hpp"
#include "weightlab/interval.hpp"

namespace weightlab {

/// Translation and length policy for a scale delta: lengths delta * f for f in
/// `length_fractions`, left endpoints on a lattice of step length / step_divisor.
struct SweepPolicy {
  int step_divisor = 8;
  std::vector<double> length_fractions{1.0, 0.5, 0.25};
};

/// Log-spaced scales from `hi` down to `lo` (decreasing, both included).
inline std::vector<double> log_scales(double hi, double lo, int count) {
  if (!(hi > 0.0 && lo > 0.0) || count < 1) throw argument_error("log_scales: bad bounds");
  if (count == 1) return {hi};
  std::vector<double> s(static_cast<std::size_t>(count));
  const double r = std::log(lo / hi) / (count - 1);
  for (int i = 0; i < count; ++i) s[static_cast<std::size_t>(i)] = hi * std::exp(r * i);
  s.front() = hi;
  s.back() = lo;
  return s;
}

inline void require_decreasing(const std::vector<double>& scales) {
  if (scales.empty()) throw argument_error("scale list is empty");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] > 0.0)) throw argument_error("scales must be positive");
    if (i > 0 && !(scales[i] < scales[i - 1])) throw argument_error("scales must be decreasing");
  }
}

/// Calls fn(x) for every lattice point x = region.midpoint() + j * step with
/// [x - reach, x + reach] inside `region`. Anchoring at the midpoint keeps
/// the centre of a symmetric window on every lattice.
template <class Fn>
void for_each_center(const Interval& region, double reach, double step, Fn&& fn) {
  if (!(reach >= 0.0) || !(step > 0.0)) throw argument_error("sweep: bad reach or step");
  const double mid = region.midpoint();
  const double slack = 1e-12 * region.length();
  const double room = 0.5 * region.length() - reach + slack;
  if (room < 0.0) return;
  const auto jmax = static_cast<long long>(std::floor(room / step));
  for (long long j = -jmax; j <= jmax; ++j) fn(mid + static_cast<double>(j) * step);
}

/// Calls fn(Interval) for every interval of length `length` inside `region`
/// whose centre lies on the lattice of step length / step_divisor anchored at
/// the region's midpoint.
template <class Fn>
void for_each_translate(const Interval& region, double length, int step_divisor, Fn&& fn) {
  if (!(length > 0.0) || step_divisor < 1) throw argument_error("sweep: bad length or step");
  for_each_center(region, 0.5 * length, length / step_divisor, [&](double c) {
    fn(Interval(std::max(region.lo(), c - 0.5 * length), std::min(region.hi(), c + 0.5 * length)));
  });
}

/// Sweep at scale delta under `policy`.
template <class Fn>
void for_each_interval(const Interval& window, double delta, const SweepPolicy& policy, Fn&& fn) {
  for (double f : policy.length_fractions) {
    const double len = delta * f;
    if (len > window.length()) continue;
    for_each_translate(window, len, policy.step_divisor, fn);
  }
}

/// Explicit list of test intervals for one-shot suprema (BMO, A_p, ...).
struct IntervalSweep {
  Interval window;
  std::vector<double> lengths;
  int step_divisor = 8;

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (double len : lengths)
      if (len <= window.length()) for_each_translate(window, len, step_divisor, fn);
  }

  /// Lengths delta, delta/2, delta/4 for every delta in `scales`.
  static IntervalSweep from_scales(const Interval& window, const std::vector<double>& scales,
                                   const SweepPolicy& policy = {}) {
    IntervalSweep s{window, {}, policy.step_divisor};
    for (double d : scales)
      for (double f : policy.length_fractions) s.lengths.push_back(d * f);
    return s;
  }
};

/// Running maximum with a witness. Ties go to the leftmost, then shortest,
/// candidate, so the argmax does not depend on evaluation order.
template <class Witness>
struct ArgMax {
  double value = -std::numeric_limits<double>::infinity();
  std::optional<Witness> witness;
  bool diverged = false;

  template <class Key>
  void offer(double v, const Witness& w, Key&& key) {
    if (std::isnan(v)) return;
    if (std::isinf(v) && v > 0) diverged = true;
    if (!witness || v > value || (v == value && key(w) < key(*witness))) {
      value = v;
      witness = w;
    }
  }

  bool empty() const noexcept { return !witness.has_value(); }
};

inline auto interval_key() {
  return [](const Interval& I) { return std::pair{I.lo(), I.length()}; };
}

/// One point of a scale-indexed supremum profile.
struct ProfileEntry {
  double scale;
  double value;
  std::optional<Interval> witness;
  bool diverged = false;
};

/// Scale-indexed suprema v(delta) of a functional over test intervals with
/// |I| <= delta. `floor` is the functional's lower bound (0 or 1).
struct OscillationProfile {
  std::vector<ProfileEntry> entries;
  double floor = 0.0;

  std::size_t size() const noexcept { return entries.size(); }
  const ProfileEntry& operator[](std::size_t i) const { return entries[i]; }
  const ProfileEntry& smallest_scale() const { return entries.back(); }
  const ProfileEntry& largest_scale() const { return entries.front(); }
};

/// Turns per-scale maxima (scales decreasing) into suprema over |I| <= delta
/// by carrying the maximum from the smallest scale upward.
inline void accumulate_from_small_scales(std::vector<ProfileEntry>& entries) {
  for (std::size_t i = entries.size(); i-- > 1;) {
    const ProfileEntry& below = entries[i];
    ProfileEntry& here = entries[i - 1];
    if (below.value > here.value) {
      here.value = below.value;
      here.witness = below.witness;
    }
    here.diverged = here.diverged || below.diverged;
  }
}

}  // namespace weightlab
