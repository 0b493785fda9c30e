#pragma once

// Experiment configuration: `key=value` entries, one per line or separated
// by whitespace on a line; `#` starts a comment.
//
//   weight=power:0:1            family spec (required)
//   window=-4,4
//   cells=65536                 grid cells for sampled families
//   scales=0.01,0.5,6           lo,hi,count; log-spaced, tested high to low
//   sweep_step=8                translates per interval length
//   analyses=vmo,carleson       run in the order given
//   ap_p=2,3                    exponents for `ap`
//   decomposition_n=4,8,12      cutoffs for `decomposition`
//   x0=0.3  t=0.2               anchor for point analyses
//   lemma_n=8
//   depth=12  panels=64         box quadrature (layers, x panels)
//   out=report.csv  format=csv

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "weightlab/errors.hpp"
#include "weightlab/families.hpp"
#include "weightlab/interval.hpp"
#include "weightlab/report.hpp"
#include "weightlab/sweep.hpp"

namespace weightlab {

inline const std::vector<std::string>& known_analyses() {
  static const std::vector<std::string> a{
      "masses",  "bmo",       "vmo",      "jn",     "sarason",       "mitsis",
      "doubling", "ap",       "ainfty",   "lemma32", "lambda-criterion", "eta",
      "carleson", "decomposition", "area", "theorem-check", "cone-box"};
  return a;
}

/// Analyses that integrate over boxes or cones and need a fine grid.
inline bool needs_fine_grid(const std::string& analysis) {
  return analysis == "carleson" || analysis == "area" || analysis == "decomposition" ||
         analysis == "theorem-check" || analysis == "cone-box";
}

inline constexpr std::size_t fine_grid_cells = 4096;

struct ExperimentConfig {
  std::string weight;
  Interval window{-4.0, 4.0};
  std::size_t cells = 65536;
  double scale_lo = 0.01;
  double scale_hi = 0.5;
  int scale_count = 6;
  int sweep_step = 8;
  std::vector<std::string> analyses;
  std::vector<double> ap_p{2.0};
  std::vector<int> decomposition_n{4, 8, 12};
  double x0 = 0.3;
  double t = 0.2;
  int lemma_n = 8;
  int depth = 12;
  int panels = 64;
  std::string out = "-";
  ReportFormat format = ReportFormat::csv;

  bool operator==(const ExperimentConfig&) const = default;

  std::vector<double> scales() const { return log_scales(scale_hi, scale_lo, scale_count); }
};

namespace detail {

inline int to_int(const std::string& v, const std::string& key, int line) {
  const long long x = parse_integer(v, key, line);
  if (x < -2147483647LL || x > 2147483647LL)
    throw config_error(config_error::kind::bad_value, key, line, "integer out of range");
  return static_cast<int>(x);
}

inline std::vector<double> number_list(const std::string& v, const std::string& key, int line) {
  std::vector<double> out;
  for (const auto& s : split(v, ',')) out.push_back(parse_number(s, key, line));
  return out;
}

inline void require(bool ok, const std::string& key, int line, const std::string& what,
                    config_error::kind k = config_error::kind::bad_value) {
  if (!ok) throw config_error(k, key, line, what);
}

inline const std::set<std::string>& known_families() {
  static const std::set<std::string> f{"constant", "power", "expsin", "step", "martingale", "sampled"};
  return f;
}

// Checks a weight spec without building it (sampled files are read later).
inline void check_weight_spec(const std::string& spec, int line) {
  const std::string tag = spec.substr(0, spec.find(':'));
  if (!known_families().count(tag))
    throw config_error(config_error::kind::unknown_family, "weight", line,
                       "unknown weight family '" + tag + "'");
  if (tag == "sampled") return;
  try {
    make_weight(spec, Interval(-1.0, 1.0), 16);
  } catch (const config_error& e) {
    throw config_error(e.which(), "weight", line, e.what());
  } catch (const error& e) {
    throw config_error(config_error::kind::bad_value, "weight", line, e.what());
  }
}

}  // namespace detail

/// Applies one key=value entry to `cfg`.
inline void apply_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value,
                        int line) {
  using detail::require;
  using detail::split;
  using K = config_error::kind;
  if (key == "weight") {
    require(!value.empty(), key, line, "empty weight spec");
    detail::check_weight_spec(value, line);
    cfg.weight = value;
  } else if (key == "window") {
    const auto v = detail::number_list(value, key, line);
    require(v.size() == 2, key, line, "window needs a,b");
    require(v[0] < v[1], key, line, "window needs a < b", K::inconsistent_bounds);
    cfg.window = Interval(v[0], v[1]);
  } else if (key == "cells") {
    const long long n = parse_integer(value, key, line);
    require(n >= 1 && n <= (1LL << 26), key, line, "cells must be in [1, 2^26]");
    cfg.cells = static_cast<std::size_t>(n);
  } else if (key == "scales") {
    const auto v = split(value, ',');
    require(v.size() == 3, key, line, "scales needs lo,hi,count");
    cfg.scale_lo = parse_number(v[0], key, line);
    cfg.scale_hi = parse_number(v[1], key, line);
    cfg.scale_count = detail::to_int(v[2], key, line);
  } else if (key == "sweep_step") {
    cfg.sweep_step = detail::to_int(value, key, line);
    require(cfg.sweep_step >= 1, key, line, "sweep_step must be >= 1");
  } else if (key == "analyses") {
    cfg.analyses.clear();
    for (const auto& raw : split(value, ',')) {
      const std::string a(detail::trim(raw));
      const auto& k = known_analyses();
      require(std::find(k.begin(), k.end(), a) != k.end(), key, line,
              "unknown analysis '" + a + "'", K::unknown_analysis);
      cfg.analyses.push_back(a);
    }
  } else if (key == "ap_p") {
    cfg.ap_p = detail::number_list(value, key, line);
    for (double p : cfg.ap_p) require(p > 1.0, key, line, "ap exponents must be > 1");
  } else if (key == "decomposition_n") {
    cfg.decomposition_n.clear();
    for (const auto& s : split(value, ',')) {
      const int n = detail::to_int(s, key, line);
      require(n >= 1 && n <= 40, key, line, "decomposition cutoffs must be in [1, 40]");
      cfg.decomposition_n.push_back(n);
    }
  } else if (key == "x0") {
    cfg.x0 = parse_number(value, key, line);
  } else if (key == "t") {
    cfg.t = parse_number(value, key, line);
    require(cfg.t > 0.0, key, line, "t must be > 0");
  } else if (key == "lemma_n") {
    cfg.lemma_n = detail::to_int(value, key, line);
    require(cfg.lemma_n >= 1 && cfg.lemma_n <= 64, key, line, "lemma_n must be in [1, 64]");
  } else if (key == "depth") {
    cfg.depth = detail::to_int(value, key, line);
    require(cfg.depth >= 1 && cfg.depth <= 40, key, line, "depth must be in [1, 40]");
  } else if (key == "panels") {
    cfg.panels = detail::to_int(value, key, line);
    require(cfg.panels >= 1 && cfg.panels <= 4096, key, line, "panels must be in [1, 4096]");
  } else if (key == "out") {
    require(!value.empty(), key, line, "empty output path");
    cfg.out = value;
  } else if (key == "format") {
    if (value == "csv") cfg.format = ReportFormat::csv;
    else if (value == "json") cfg.format = ReportFormat::json;
    else throw config_error(K::bad_value, key, line, "format must be csv or json");
  } else {
    throw config_error(K::unknown_key, key, line, "unknown key");
  }
}

/// Cross-field checks. Line numbers point at the entry that set the key
/// when `lines` knows it.
inline void validate(const ExperimentConfig& cfg, const std::map<std::string, int>& lines = {}) {
  auto at = [&](const std::string& k) {
    const auto it = lines.find(k);
    return it == lines.end() ? 0 : it->second;
  };
  using K = config_error::kind;
  if (cfg.weight.empty()) throw config_error(K::missing_key, "weight", 0, "weight is required");
  if (cfg.analyses.empty()) throw config_error(K::missing_key, "analyses", 0, "analyses is required");
  const int sl = at("scales");
  if (!(cfg.scale_lo > 0.0 && cfg.scale_lo < cfg.scale_hi))
    throw config_error(K::inconsistent_bounds, "scales", sl, "need 0 < lo < hi");
  if (cfg.scale_hi > cfg.window.length())
    throw config_error(K::inconsistent_bounds, "scales", sl, "largest scale exceeds the window");
  if (cfg.scale_count < 2 || cfg.scale_count > 64)
    throw config_error(K::bad_value, "scales", sl, "count must be in [2, 64]");
  const bool fine = std::any_of(cfg.analyses.begin(), cfg.analyses.end(), needs_fine_grid);
  if (fine && cfg.cells < fine_grid_cells)
    throw config_error(K::inconsistent_bounds, "cells", at("cells"),
                       "box and cone analyses need cells >= 4096");
}

inline ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  std::map<std::string, int> seen;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    std::istringstream tokens(raw);
    std::string tok;
    while (tokens >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos || eq == 0)
        throw config_error(config_error::kind::bad_value, tok, line, "expected key=value");
      const std::string key = tok.substr(0, eq);
      if (!seen.emplace(key, line).second)
        throw config_error(config_error::kind::bad_value, key, line, "duplicate key");
      apply_entry(cfg, key, tok.substr(eq + 1), line);
    }
  }
  validate(cfg, seen);
  return cfg;
}

inline std::string serialize(const ExperimentConfig& cfg) {
  auto join_d = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_number(v[i]);
    return s;
  };
  std::string analyses, ns;
  for (std::size_t i = 0; i < cfg.analyses.size(); ++i) analyses += (i ? "," : "") + cfg.analyses[i];
  for (std::size_t i = 0; i < cfg.decomposition_n.size(); ++i)
    ns += (i ? "," : "") + std::to_string(cfg.decomposition_n[i]);
  std::ostringstream o;
  o << "weight=" << cfg.weight << '\n'
    << "window=" << format_number(cfg.window.lo()) << ',' << format_number(cfg.window.hi()) << '\n'
    << "cells=" << cfg.cells << '\n'
    << "scales=" << format_number(cfg.scale_lo) << ',' << format_number(cfg.scale_hi) << ','
    << cfg.scale_count << '\n'
    << "sweep_step=" << cfg.sweep_step << '\n'
    << "analyses=" << analyses << '\n'
    << "ap_p=" << join_d(cfg.ap_p) << '\n'
    << "decomposition_n=" << ns << '\n'
    << "x0=" << format_number(cfg.x0) << '\n'
    << "t=" << format_number(cfg.t) << '\n'
    << "lemma_n=" << cfg.lemma_n << '\n'
    << "depth=" << cfg.depth << '\n'
    << "panels=" << cfg.panels << '\n'
    << "out=" << cfg.out << '\n'
    << "format=" << (cfg.format == ReportFormat::csv ? "csv" : "json") << '\n';
  return o.str();
}

}  // namespace weightlab
