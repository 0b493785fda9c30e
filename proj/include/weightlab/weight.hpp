#pragma once

// Weights on a bounded working window with exact interval masses.
//
// Every weight exposes an antiderivative F with mass(a, b) = F(b) - F(a),
// the antiderivative of log(density), and the points where log(density)
// crosses given levels. The last two make averages and mean oscillations of
// log(w) exact in-model.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "weightlab/errors.hpp"
#include "weightlab/interval.hpp"
#include "weightlab/quadrature.hpp"

namespace weightlab {

enum class Family { constant, power, expsin, step, sampled };

inline const char* family_name(Family f) noexcept {
  switch (f) {
    case Family::constant: return "constant";
    case Family::power: return "power";
    case Family::expsin: return "expsin";
    case Family::step: return "step";
    case Family::sampled: return "sampled";
  }
  return "?";
}

namespace detail {

inline constexpr double inf = std::numeric_limits<double>::infinity();

/// Tabulated antiderivative of exp(a sin(b x)) on [lo, hi]. Node values come
/// from 8-point Gauss-Legendre per panel; between nodes F is the quintic
/// Hermite interpolant through F, F' = w and F'' = w'. With panel width
/// 2^-9 the interpolation error sits below double rounding for |a b| <= 4.
class ExpSinTable {
 public:
  ExpSinTable(double a, double b, double lo, double hi) : a_(a), b_(b), lo_(lo) {
    const double target = 1.0 / 512.0;
    n_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((hi - lo) / target)));
    h_ = (hi - lo) / static_cast<double>(n_);
    F_.resize(n_ + 1);
    w_.resize(n_ + 1);
    dw_.resize(n_ + 1);
    long double acc = 0.0L;
    for (std::size_t k = 0; k <= n_; ++k) {
      const double x = node(k);
      if (k > 0) acc += quad::gauss8([this](double s) { return density(s); }, node(k - 1), x);
      F_[k] = static_cast<double>(acc);
      w_[k] = density(x);
      dw_[k] = w_[k] * a_ * b_ * std::cos(b_ * x);
    }
  }

  double density(double x) const { return std::exp(a_ * std::sin(b_ * x)); }

  double antiderivative(double x) const {
    double u = (x - lo_) / h_;
    std::size_t k = u <= 0.0 ? 0 : static_cast<std::size_t>(u);
    if (k >= n_) k = n_ - 1;
    const double t = u - static_cast<double>(k);
    return quad::quintic_hermite(t, h_, F_[k], w_[k], dw_[k], F_[k + 1], w_[k + 1], dw_[k + 1]);
  }

 private:
  double node(std::size_t k) const { return lo_ + static_cast<double>(k) * h_; }

  double a_, b_, lo_, h_ = 0.0;
  std::size_t n_ = 0;
  std::vector<double> F_, w_, dw_;
};

// s log|s| - s, the antiderivative of log|s| vanishing at 0.
inline double xlogx_minus_x(double s) {
  if (s == 0.0) return 0.0;
  return s * std::log(std::abs(s)) - s;
}

inline void push_if_inside(std::vector<double>& out, double x, double a, double b) {
  if (x > a && x < b) out.push_back(x);
}

}  // namespace detail

/// Closed-form weight: scale * base density, with base one of
///   constant  c
///   power     |x - c|^alpha
///   expsin    exp(a sin(b x))
///   step      v1 for x < x0, v2 for x >= x0
class AnalyticWeight {
 public:
  static AnalyticWeight constant(double c) {
    if (!(c > 0.0) || !std::isfinite(c)) throw argument_error("constant weight needs c > 0");
    return AnalyticWeight(Family::constant, {c}, c);
  }

  /// alpha must exceed -1 (local integrability).
  static AnalyticWeight power(double center, double alpha) {
    if (!(alpha > -1.0) || !std::isfinite(alpha) || !std::isfinite(center))
      throw argument_error("power weight needs alpha > -1 (local integrability)");
    return AnalyticWeight(Family::power, {center, alpha}, 1.0);
  }

  /// The antiderivative is tabulated over `domain`.
  static AnalyticWeight expsin(double a, double b, const Interval& domain) {
    if (!std::isfinite(a) || !std::isfinite(b)) throw argument_error("expsin needs finite a, b");
    AnalyticWeight w(Family::expsin, {a, b}, 1.0);
    w.table_ = std::make_shared<const detail::ExpSinTable>(a, b, domain.lo(), domain.hi());
    return w;
  }

  static AnalyticWeight step(double x0, double v1, double v2) {
    if (!(v1 > 0.0 && v2 > 0.0) || !std::isfinite(v1) || !std::isfinite(v2) ||
        !std::isfinite(x0))
      throw argument_error("step weight needs positive values");
    return AnalyticWeight(Family::step, {x0, v1, v2}, 1.0);
  }

  Family family() const noexcept { return family_; }
  const std::vector<double>& parameters() const noexcept { return params_; }
  double scale() const noexcept { return scale_; }

  double density(double x) const {
    switch (family_) {
      case Family::constant: return scale_;
      case Family::power: {
        const double r = std::abs(x - params_[0]);
        if (r == 0.0) return params_[1] > 0.0 ? 0.0 : (params_[1] < 0.0 ? detail::inf : scale_);
        return scale_ * std::pow(r, params_[1]);
      }
      case Family::expsin: return scale_ * table_->density(x);
      case Family::step: return scale_ * (x < params_[0] ? params_[1] : params_[2]);
      case Family::sampled: break;
    }
    return 0.0;
  }

  double log_density(double x) const {
    switch (family_) {
      case Family::constant: return std::log(scale_);
      case Family::power: {
        const double r = std::abs(x - params_[0]);
        if (params_[1] == 0.0) return std::log(scale_);
        if (r == 0.0) return params_[1] > 0.0 ? -detail::inf : detail::inf;
        return std::log(scale_) + params_[1] * std::log(r);
      }
      case Family::expsin: return std::log(scale_) + params_[0] * std::sin(params_[1] * x);
      case Family::step: return std::log(scale_ * (x < params_[0] ? params_[1] : params_[2]));
      case Family::sampled: break;
    }
    return 0.0;
  }

  /// Antiderivative of the density. Only meaningful when the density is
  /// locally integrable everywhere (power exponent > -1).
  double antiderivative(double x) const {
    switch (family_) {
      case Family::constant: return scale_ * x;
      case Family::power: {
        const double s = x - params_[0];
        const double e = params_[1] + 1.0;
        const double g = std::pow(std::abs(s), e) / e;
        return scale_ * (s < 0.0 ? -g : g);
      }
      case Family::expsin: return scale_ * table_->antiderivative(x);
      case Family::step: {
        const double x0 = params_[0];
        return scale_ * (x < x0 ? params_[1] * (x - x0) : params_[2] * (x - x0));
      }
      case Family::sampled: break;
    }
    return 0.0;
  }

  /// Mass of [a, b]; +inf when a power exponent <= -1 meets its singularity.
  double mass(double a, double b) const {
    if (family_ == Family::power && params_[1] <= -1.0) {
      const double c = params_[0];
      const double alpha = params_[1];
      if (a <= c && c <= b) return detail::inf;
      const double ra = std::abs(a - c);
      const double rb = std::abs(b - c);
      if (alpha == -1.0) return scale_ * std::abs(std::log(rb / ra));
      const double e = alpha + 1.0;
      return scale_ * std::abs((std::pow(rb, e) - std::pow(ra, e)) / e);
    }
    if (family_ == Family::expsin && b - a <= 0.25) {
      // Direct quadrature keeps full relative precision on short intervals.
      const int panels = std::max(1, static_cast<int>(std::ceil((b - a) * 64.0)));
      const double h = (b - a) / panels;
      double s = 0.0;
      for (int i = 0; i < panels; ++i)
        s += quad::gauss8([this](double x) { return table_->density(x); }, a + i * h,
                          a + (i + 1) * h);
      return scale_ * s;
    }
    return antiderivative(b) - antiderivative(a);
  }

  /// Integral of log(density) over [a, b].
  double log_integral(double a, double b) const {
    if (family_ == Family::expsin && params_[1] != 0.0) {
      // cos(fb) - cos(fa) = -2 sin(f(a+b)/2) sin(f(b-a)/2), free of cancellation.
      const double amp = params_[0];
      const double f = params_[1];
      const double diff = 2.0 * std::sin(0.5 * f * (a + b)) * std::sin(0.5 * f * (b - a));
      return std::log(scale_) * (b - a) + amp * diff / f;
    }
    return log_antiderivative(b) - log_antiderivative(a);
  }

  /// Antiderivative of log(density).
  double log_antiderivative(double x) const {
    const double ls = std::log(scale_);
    switch (family_) {
      case Family::constant: return ls * x;
      case Family::power: return ls * x + params_[1] * detail::xlogx_minus_x(x - params_[0]);
      case Family::expsin: {
        const double a = params_[0];
        const double b = params_[1];
        if (b == 0.0) return ls * x;
        return ls * x - a * std::cos(b * x) / b;
      }
      case Family::step: {
        const double x0 = params_[0];
        const double v = x < x0 ? params_[1] : params_[2];
        return (ls + std::log(v)) * (x - x0);
      }
      case Family::sampled: break;
    }
    return 0.0;
  }

  /// Appends points of (a, b) where log(density) equals one of `levels`, or
  /// where it jumps or is singular.
  void log_cuts(double a, double b, std::span<const double> levels,
                std::vector<double>& out) const {
    const double ls = std::log(scale_);
    switch (family_) {
      case Family::constant: return;
      case Family::power: {
        const double c = params_[0];
        const double alpha = params_[1];
        detail::push_if_inside(out, c, a, b);
        if (alpha == 0.0) return;
        for (double L : levels) {
          const double r = std::exp((L - ls) / alpha);
          if (!std::isfinite(r)) continue;
          detail::push_if_inside(out, c - r, a, b);
          detail::push_if_inside(out, c + r, a, b);
        }
        return;
      }
      case Family::expsin: {
        const double amp = params_[0];
        const double freq = params_[1];
        if (amp == 0.0 || freq == 0.0) return;
        const double two_pi = 2.0 * std::numbers::pi;
        const double lo = std::min(freq * a, freq * b);
        const double hi = std::max(freq * a, freq * b);
        for (double L : levels) {
          const double s = (L - ls) / amp;
          if (!(s >= -1.0 && s <= 1.0)) continue;
          const double base1 = std::asin(s);
          for (double base : {base1, std::numbers::pi - base1}) {
            const double k0 = std::ceil((lo - base) / two_pi);
            const double k1 = std::floor((hi - base) / two_pi);
            for (double k = k0; k <= k1; k += 1.0)
              detail::push_if_inside(out, (base + two_pi * k) / freq, a, b);
          }
        }
        return;
      }
      case Family::step: detail::push_if_inside(out, params_[0], a, b); return;
      case Family::sampled: return;
    }
  }

  /// Weight with density^s (may be non-integrable for power families).
  AnalyticWeight powered(double s, const Interval& domain) const {
    AnalyticWeight w = *this;
    w.scale_ = std::pow(scale_, s);
    switch (family_) {
      case Family::constant: w.params_ = {std::pow(params_[0], s)}; w.scale_ = w.params_[0]; break;
      case Family::power: w.params_[1] = params_[1] * s; break;
      case Family::expsin:
        w.params_[0] = params_[0] * s;
        w.table_ = std::make_shared<const detail::ExpSinTable>(w.params_[0], params_[1],
                                                                domain.lo(), domain.hi());
        break;
      case Family::step:
        w.params_[1] = std::pow(params_[1], s);
        w.params_[2] = std::pow(params_[2], s);
        break;
      case Family::sampled: break;
    }
    return w;
  }

  AnalyticWeight scaled(double c) const {
    AnalyticWeight w = *this;
    if (family_ == Family::constant) {
      w.params_[0] *= c;
      w.scale_ = w.params_[0];
    } else {
      w.scale_ *= c;
    }
    return w;
  }

 private:
  AnalyticWeight(Family f, std::vector<double> p, double scale)
      : family_(f), params_(std::move(p)), scale_(scale) {}

  Family family_;
  std::vector<double> params_;
  double scale_;
  std::shared_ptr<const detail::ExpSinTable> table_;
};

/// Piecewise-constant density on a uniform grid with prefix-sum masses.
class SampledWeight {
 public:
  SampledWeight(GridSpec grid, std::vector<double> values) : grid_(grid) {
    if (values.size() != grid.cells)
      throw argument_error("sampled weight: value count does not match grid cells");
    for (double v : values)
      if (!(v > 0.0) || !std::isfinite(v))
        throw argument_error("sampled weight: every cell value must be finite and > 0");
    const double w = grid.cell_width();
    const std::size_t n = values.size();
    std::vector<long double> prefix(n + 1), log_prefix(n + 1), tree(2 * n), log_tree(2 * n);
    long double acc = 0.0L, lacc = 0.0L;
    prefix[0] = log_prefix[0] = 0.0L;
    for (std::size_t k = 0; k < n; ++k) {
      tree[n + k] = static_cast<long double>(values[k]) * w;
      log_tree[n + k] = static_cast<long double>(std::log(values[k])) * w;
      acc += tree[n + k];
      lacc += log_tree[n + k];
      prefix[k + 1] = acc;
      log_prefix[k + 1] = lacc;
    }
    for (std::size_t i = n - 1; i > 0; --i) {
      tree[i] = tree[2 * i] + tree[2 * i + 1];
      log_tree[i] = log_tree[2 * i] + log_tree[2 * i + 1];
    }
    values_ = std::make_shared<const std::vector<double>>(std::move(values));
    prefix_ = std::make_shared<const std::vector<long double>>(std::move(prefix));
    log_prefix_ = std::make_shared<const std::vector<long double>>(std::move(log_prefix));
    tree_ = std::make_shared<const std::vector<long double>>(std::move(tree));
    log_tree_ = std::make_shared<const std::vector<long double>>(std::move(log_tree));
  }

  const GridSpec& grid() const noexcept { return grid_; }
  std::span<const double> cell_values() const noexcept { return *values_; }
  std::span<const long double> prefix_masses() const noexcept { return *prefix_; }

  std::size_t cell_of(double x) const noexcept {
    const double u = (x - grid_.domain.lo()) / grid_.cell_width();
    if (!(u > 0.0)) return 0;
    const auto k = static_cast<std::size_t>(u);
    return std::min(k, grid_.cells - 1);
  }

  double density(double x) const noexcept { return (*values_)[cell_of(x)]; }
  double log_density(double x) const noexcept { return std::log(density(x)); }

  double antiderivative(double x) const noexcept {
    const std::size_t k = cell_of(x);
    return static_cast<double>((*prefix_)[k] + (x - grid_.cell_lo(k)) * (*values_)[k]);
  }

  double log_antiderivative(double x) const noexcept {
    const std::size_t k = cell_of(x);
    return static_cast<double>((*log_prefix_)[k] + (x - grid_.cell_lo(k)) * std::log((*values_)[k]));
  }

  /// Mass of [a, b]. Whole cells are summed over segment tree nodes inside
  /// the span, so the result keeps relative precision when the span's mass
  /// is tiny next to the total (prefix differences would not).
  double mass(double a, double b) const noexcept {
    return span_integral(a, b, *tree_, [](double v) { return v; });
  }

  double log_integral(double a, double b) const noexcept {
    return span_integral(a, b, *log_tree_, [](double v) { return std::log(v); });
  }

  /// Cell boundaries strictly inside (a, b); log(density) is constant between them.
  void log_cuts(double a, double b, std::vector<double>& out) const {
    std::size_t k = cell_of(a) + 1;
    const std::size_t last = cell_of(b);
    for (; k <= last; ++k) detail::push_if_inside(out, grid_.cell_lo(k), a, b);
  }

  template <class G>
  double span_integral(double a, double b, const std::vector<long double>& tree,
                       G&& g) const noexcept {
    const std::size_t ka = cell_of(a);
    const std::size_t kb = cell_of(b);
    const auto& v = *values_;
    if (ka == kb) return (b - a) * g(v[ka]);
    // cells ka+1 .. kb-1
    long double inner = 0.0L;
    const std::size_t n = v.size();
    for (std::size_t l = ka + 1 + n, r = kb + n; l < r; l >>= 1, r >>= 1) {
      if (l & 1) inner += tree[l++];
      if (r & 1) inner += tree[--r];
    }
    return static_cast<double>(static_cast<long double>((grid_.cell_lo(ka + 1) - a) * g(v[ka])) + inner +
                               static_cast<long double>((b - grid_.cell_lo(kb)) * g(v[kb])));
  }

  SampledWeight powered(double s) const {
    std::vector<double> v(values_->begin(), values_->end());
    for (double& x : v) x = std::pow(x, s);
    return SampledWeight(grid_, std::move(v));
  }

  SampledWeight scaled(double c) const {
    std::vector<double> v(values_->begin(), values_->end());
    for (double& x : v) x *= c;
    return SampledWeight(grid_, std::move(v));
  }

 private:
  GridSpec grid_;
  std::shared_ptr<const std::vector<double>> values_;
  std::shared_ptr<const std::vector<long double>> prefix_, log_prefix_;
  std::shared_ptr<const std::vector<long double>> tree_, log_tree_;  ///< leaves at [n, 2n)
};

/// A weight together with its working domain. All queries must stay inside
/// the domain.
class Weight {
 public:
  Weight(AnalyticWeight w, Interval domain) : rep_(std::move(w)), domain_(domain) {}
  Weight(SampledWeight w) : rep_(std::move(w)), domain_(std::get<SampledWeight>(rep_).grid().domain) {}

  const Interval& domain() const noexcept { return domain_; }
  bool is_sampled() const noexcept { return std::holds_alternative<SampledWeight>(rep_); }
  Family family() const {
    if (is_sampled()) return Family::sampled;
    return std::get<AnalyticWeight>(rep_).family();
  }
  const AnalyticWeight* analytic() const noexcept { return std::get_if<AnalyticWeight>(&rep_); }
  const SampledWeight* sampled() const noexcept { return std::get_if<SampledWeight>(&rep_); }

  /// Throws domain_error unless [a, b] lies inside the working domain (a
  /// relative slack of 1e-12 absorbs rounding in computed endpoints).
  void require_inside(double a, double b) const {
    const double slack = 1e-12 * std::max(1.0, domain_.length());
    if (!(a >= domain_.lo() - slack && b <= domain_.hi() + slack))
      throw domain_error("interval [" + std::to_string(a) + ", " + std::to_string(b) +
                         "] leaves the working domain [" + std::to_string(domain_.lo()) + ", " +
                         std::to_string(domain_.hi()) + "]");
  }

  double mass(double a, double b) const {
    require_inside(a, b);
    return unchecked_mass(a, b);
  }
  double mass(const Interval& I) const { return mass(I.lo(), I.hi()); }

  /// Mass without the domain check, for inner loops whose geometry has
  /// already been validated.
  double unchecked_mass(double a, double b) const {
    if (const auto* s = sampled()) return s->mass(a, b);
    return std::get<AnalyticWeight>(rep_).mass(a, b);
  }

  /// Antiderivative F with mass(a, b) = F(b) - F(a). No domain check.
  double antiderivative(double x) const {
    if (const auto* s = sampled()) return s->antiderivative(x);
    return std::get<AnalyticWeight>(rep_).antiderivative(x);
  }

  double density(double x) const {
    if (const auto* s = sampled()) return s->density(x);
    return std::get<AnalyticWeight>(rep_).density(x);
  }

  double log_density(double x) const {
    if (const auto* s = sampled()) return s->log_density(x);
    return std::get<AnalyticWeight>(rep_).log_density(x);
  }

  /// Integral of log(density) over [a, b].
  double log_integral(double a, double b) const {
    require_inside(a, b);
    if (const auto* s = sampled()) return s->log_integral(a, b);
    return std::get<AnalyticWeight>(rep_).log_integral(a, b);
  }

  void log_cuts(double a, double b, std::span<const double> levels,
                std::vector<double>& out) const {
    if (const auto* s = sampled()) return s->log_cuts(a, b, out);
    std::get<AnalyticWeight>(rep_).log_cuts(a, b, levels, out);
  }

  /// Weight with density^s on the same domain.
  Weight powered(double s) const {
    if (const auto* w = sampled()) return Weight(w->powered(s));
    return Weight(std::get<AnalyticWeight>(rep_).powered(s, domain_), domain_);
  }

  /// c * w for c > 0.
  Weight scaled(double c) const {
    if (!(c > 0.0)) throw argument_error("scaled: factor must be > 0");
    if (const auto* w = sampled()) return Weight(w->scaled(c));
    return Weight(std::get<AnalyticWeight>(rep_).scaled(c), domain_);
  }

 private:
  std::variant<AnalyticWeight, SampledWeight> rep_;
  Interval domain_;
};

/// w(I).
inline double mass(const Weight& w, const Interval& I) { return w.mass(I); }

/// w_I = w(I) / |I|.
inline double average_density(const Weight& w, const Interval& I) {
  const double m = w.mass(I);
  if (!(m > 0.0)) throw degenerate_weight_error("zero mass on interval");
  return m / I.length();
}

/// h(x) = h0 + signed mass of w between 0 and x.
inline double primitive_homeomorphism(const Weight& w, double h0, double x) {
  w.require_inside(std::min(0.0, x), std::max(0.0, x));
  return h0 + (w.antiderivative(x) - w.antiderivative(0.0));
}

/// Samples a density onto a grid (cell midpoints) as a SampledWeight.
template <class Density>
SampledWeight sample_density(const GridSpec& grid, Density&& density) {
  std::vector<double> v(grid.cells);
  for (std::size_t k = 0; k < grid.cells; ++k) v[k] = density(grid.cell_mid(k));
  return SampledWeight(grid, std::move(v));
}

/// Samples with exact cell averages (mass of the cell / width) so that the
/// sampled weight reproduces the masses of every grid-aligned interval.
inline SampledWeight sample_cell_averages(const GridSpec& grid, const Weight& w) {
  std::vector<double> v(grid.cells);
  const double h = grid.cell_width();
  for (std::size_t k = 0; k < grid.cells; ++k) {
    const double a = grid.cell_lo(k);
    v[k] = w.mass(a, a + h) / h;
  }
  return SampledWeight(grid, std::move(v));
}

}  // namespace weightlab
