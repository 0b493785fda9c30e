#pragma once

// Weight family spec strings and the built-in registry.
//
//   constant:<c>
//   power:<c>:<alpha>                      |x - c|^alpha, alpha > -1
//   expsin:<a>:<b>                         exp(a sin(b x))
//   step:<x0>:<v1>:<v2>                    v1 left of x0, v2 from x0 on
//   martingale:<c0>:<decay>:<levels>:<seed>
//       log w = sum_k c0 k^-decay s_k(x), s_k = +-1 constant on the level-k
//       dyadic intervals of the window, signs drawn from mt19937_64(seed)
//   sampled:<path>                         CSV of x,density pairs, linearly
//                                          resampled at cell midpoints

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "weightlab/errors.hpp"
#include "weightlab/interval.hpp"
#include "weightlab/weight.hpp"

namespace weightlab {

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t p = s.find(sep, start);
    out.emplace_back(s.substr(start, p == std::string_view::npos ? s.npos : p - start));
    if (p == std::string_view::npos) break;
    start = p + 1;
  }
  return out;
}

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline bool try_parse_double(std::string_view s, double& out) {
  s = trim(s);
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && p == s.data() + s.size() && std::isfinite(out);
}

}  // namespace detail

/// Parses a real number or throws config_error(malformed_number) naming `key`.
inline double parse_number(std::string_view s, const std::string& key, int line = 0) {
  double v;
  if (!detail::try_parse_double(s, v))
    throw config_error(config_error::kind::malformed_number, key, line,
                       "malformed number '" + std::string(s) + "'");
  return v;
}

inline long long parse_integer(std::string_view s, const std::string& key, int line = 0) {
  s = detail::trim(s);
  long long v;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || p != s.data() + s.size())
    throw config_error(config_error::kind::malformed_number, key, line,
                       "malformed integer '" + std::string(s) + "'");
  return v;
}

/// Dyadic-martingale log weight sampled on `grid`.
inline SampledWeight martingale_weight(const GridSpec& grid, double c0, double decay, int levels,
                                       std::uint64_t seed) {
  if (levels < 1 || levels > 24) throw argument_error("martingale: levels must be in [1, 24]");
  std::mt19937_64 rng(seed);
  std::vector<double> logw(grid.cells, 0.0);
  for (int k = 1; k <= levels; ++k) {
    const std::size_t count = std::size_t{1} << k;
    std::vector<double> sign(count);
    for (auto& s : sign) s = (rng() >> 63) ? 1.0 : -1.0;
    const double ck = c0 * std::pow(static_cast<double>(k), -decay);
    for (std::size_t c = 0; c < grid.cells; ++c) {
      const double u = (grid.cell_mid(c) - grid.domain.lo()) / grid.domain.length();
      const auto j = std::min(count - 1, static_cast<std::size_t>(u * static_cast<double>(count)));
      logw[c] += ck * sign[j];
    }
  }
  for (double& v : logw) v = std::exp(v);
  return SampledWeight(grid, std::move(logw));
}

/// Reads `x,density` rows (an optional non-numeric header line is skipped)
/// and resamples them at the grid's cell midpoints by linear interpolation,
/// holding the end values outside the data range.
inline SampledWeight load_sampled_csv(const std::string& path, const GridSpec& grid) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open sampled weight file '" + path + "'");
  std::vector<std::pair<double, double>> pts;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto cols = detail::split(t, ',');
    double x, d;
    if (cols.size() != 2 || !detail::try_parse_double(cols[0], x) ||
        !detail::try_parse_double(cols[1], d)) {
      if (pts.empty() && lineno == 1) continue;  // header
      throw config_error(config_error::kind::malformed_number, "weight", lineno,
                         "bad row in '" + path + "'");
    }
    if (!(d > 0.0))
      throw config_error(config_error::kind::bad_value, "weight", lineno,
                         "densities must be > 0 in '" + path + "'");
    pts.emplace_back(x, d);
  }
  if (pts.size() < 2)
    throw config_error(config_error::kind::bad_value, "weight", 0,
                       "sampled weight needs at least two rows");
  std::sort(pts.begin(), pts.end());
  std::vector<double> v(grid.cells);
  for (std::size_t k = 0; k < grid.cells; ++k) {
    const double x = grid.cell_mid(k);
    auto it = std::lower_bound(pts.begin(), pts.end(), std::pair{x, -1.0});
    if (it == pts.begin()) v[k] = pts.front().second;
    else if (it == pts.end()) v[k] = pts.back().second;
    else {
      const auto& [x1, d1] = *it;
      const auto& [x0, d0] = *(it - 1);
      v[k] = x1 == x0 ? d1 : d0 + (d1 - d0) * (x - x0) / (x1 - x0);
    }
  }
  return SampledWeight(grid, std::move(v));
}

/// Builds a weight from its spec string on `window` (with `cells` grid
/// cells for sampled families).
inline Weight make_weight(const std::string& spec, const Interval& window, std::size_t cells) {
  const std::string key = "weight";
  const auto colon = spec.find(':');
  const std::string tag = spec.substr(0, colon);
  if (tag == "sampled") {
    if (colon == std::string::npos || colon + 1 == spec.size())
      throw config_error(config_error::kind::bad_value, key, 0, "sampled needs a path");
    return Weight(load_sampled_csv(spec.substr(colon + 1), GridSpec(window, cells)));
  }
  const auto parts = detail::split(spec, ':');
  auto arity = [&](std::size_t n) {
    if (parts.size() != n + 1)
      throw config_error(config_error::kind::bad_value, key, 0,
                         "family '" + tag + "' takes " + std::to_string(n) + " parameters");
  };
  auto num = [&](std::size_t i) { return parse_number(parts[i], key); };
  if (tag == "constant") {
    arity(1);
    const double c = num(1);
    if (!(c > 0.0)) throw config_error(config_error::kind::bad_value, key, 0, "constant needs c > 0");
    return Weight(AnalyticWeight::constant(c), window);
  }
  if (tag == "power") {
    arity(2);
    const double c = num(1), alpha = num(2);
    if (!(alpha > -1.0))
      throw config_error(config_error::kind::not_integrable, key, 0,
                         "power exponent alpha <= -1 is not locally integrable");
    return Weight(AnalyticWeight::power(c, alpha), window);
  }
  if (tag == "expsin") {
    arity(2);
    return Weight(AnalyticWeight::expsin(num(1), num(2), window), window);
  }
  if (tag == "step") {
    arity(3);
    const double x0 = num(1), v1 = num(2), v2 = num(3);
    if (!(v1 > 0.0 && v2 > 0.0))
      throw config_error(config_error::kind::bad_value, key, 0, "step values must be > 0");
    return Weight(AnalyticWeight::step(x0, v1, v2), window);
  }
  if (tag == "martingale") {
    arity(4);
    const double c0 = num(1), decay = num(2);
    const long long levels = parse_integer(parts[3], key);
    const long long seed = parse_integer(parts[4], key);
    if (levels < 1 || levels > 24)
      throw config_error(config_error::kind::bad_value, key, 0, "martingale levels must be in [1, 24]");
    if (seed < 0) throw config_error(config_error::kind::bad_value, key, 0, "seed must be >= 0");
    return Weight(martingale_weight(GridSpec(window, cells), c0, decay, static_cast<int>(levels),
                                    static_cast<std::uint64_t>(seed)));
  }
  throw config_error(config_error::kind::unknown_family, key, 0, "unknown weight family '" + tag + "'");
}

struct FamilyInfo {
  std::string name;
  std::string syntax;
  std::string role;
  std::string example;
};

/// Built-in families with a representative instance of each.
inline const std::vector<FamilyInfo>& family_registry() {
  static const std::vector<FamilyInfo> r{
      {"constant", "constant:<c>", "flat weight; every modulus sits at its floor", "constant:1"},
      {"power", "power:<c>:<alpha>", "|x-c|^alpha, alpha > -1; log in BMO but not VMO",
       "power:0:1"},
      {"expsin", "expsin:<a>:<b>", "exp(a sin(b x)); smooth log, vanishing everywhere",
       "expsin:1:1"},
      {"step", "step:<x0>:<v1>:<v2>", "jump at x0; doubling but not vanishing there",
       "step:0:1:4"},
      {"martingale", "martingale:<c0>:<decay>:<levels>:<seed>",
       "dyadic martingale log weight with coefficients c0 k^-decay", "martingale:1:0:8:7"},
      {"sampled", "sampled:<path>", "piecewise-constant weight resampled from x,density CSV", ""},
  };
  return r;
}

}  // namespace weightlab
