#pragma once

// Runs the analyses of an ExperimentConfig in declaration order and turns
// each result into report rows. Analyses run one after another, so rows are
// already in declaration order.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "weightlab/area.hpp"
#include "weightlab/carleson.hpp"
#include "weightlab/config.hpp"
#include "weightlab/families.hpp"
#include "weightlab/muckenhoupt.hpp"
#include "weightlab/oscillation.hpp"
#include "weightlab/report.hpp"

namespace weightlab {

inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 2;
inline constexpr int exit_analysis = 3;
inline constexpr int exit_io = 4;

struct ExperimentResult {
  std::vector<ReportRow> rows;
  int status = exit_ok;
};

namespace detail {

inline std::string interval_id(const Interval& I) {
  return "[" + format_number(I.lo()) + ";" + format_number(I.hi()) + "]";
}

class RowSink {
 public:
  RowSink(std::vector<ReportRow>& rows, std::string analysis, std::string weight)
      : rows_(rows), analysis_(std::move(analysis)), weight_(std::move(weight)) {}

  ReportRow& add() {
    rows_.push_back({});
    rows_.back().analysis = analysis_;
    rows_.back().weight = weight_;
    return rows_.back();
  }

  void profile(const OscillationProfile& p, const std::string& verdict,
               std::optional<BoxQuadrature> q = std::nullopt, std::string id = "") {
    for (const auto& e : p.entries) {
      auto& r = add();
      r.scale = e.scale;
      r.id = id;
      r.value = e.diverged ? std::numeric_limits<double>::infinity() : e.value;
      r.set_witness(e.witness);
      r.floor = p.floor;
      if (q) {
        r.depth = q->depth;
        r.panels = q->x_panels;
      }
      r.verdict = e.diverged ? "diverged" : verdict;
    }
  }

 private:
  std::vector<ReportRow>& rows_;
  std::string analysis_;
  std::string weight_;
};

inline std::string lemma_verdict(LemmaStatus s) { return to_string(s); }

inline void run_analysis(const std::string& a, const ExperimentConfig& cfg, const Weight& w,
                         std::vector<ReportRow>& rows) {
  RowSink out(rows, a, cfg.weight);
  const auto scales = cfg.scales();
  const SweepPolicy policy{cfg.sweep_step, {1.0, 0.5, 0.25}};
  const IntervalSweep sweep = IntervalSweep::from_scales(cfg.window, scales, policy);
  const BoxQuadrature point_q{cfg.depth, cfg.panels, 16};

  if (a == "masses") {
    for (double d : scales) {
      const Interval I = Interval::centered(cfg.x0, d);
      auto& r = out.add();
      r.scale = d;
      r.id = interval_id(I);
      r.value = w.mass(I);
      r.value2 = average_density(w, I);
      r.set_witness(I);
      r.verdict = "ok";
    }
    auto& r = out.add();
    r.id = "window";
    r.value = w.mass(cfg.window);
    r.value2 = average_density(w, cfg.window);
    r.set_witness(cfg.window);
    r.verdict = "ok";
  } else if (a == "bmo") {
    const auto s = bmo_norm_estimate(LogWeight(w), sweep);
    auto& r = out.add();
    r.id = "sup";
    r.value = s.value;
    r.set_witness(s.witness);
    r.floor = 0.0;
    r.verdict = "lower-bound";
  } else if (a == "vmo") {
    const auto p = vmo_modulus(LogWeight(w), cfg.window, scales, policy);
    out.profile(p, to_string(classify(p)));
  } else if (a == "jn") {
    const LogWeight u(w);
    const auto s = bmo_norm_estimate(u, sweep);
    if (!(s.value > 0.0)) {
      auto& r = out.add();
      r.id = "fit";
      r.value = 0.0;
      r.set_witness(s.witness);
      r.verdict = "constant-log";
      return;
    }
    std::vector<double> lambdas;
    for (int k = 1; k <= 16; ++k) lambdas.push_back(0.25 * k * s.value);
    const auto tail = jn_tail(u, s.witness, lambdas, s.value);
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
      auto& r = out.add();
      r.id = "lambda=" + format_number(lambdas[k]);
      r.value = tail.tail_fractions[k];
      if (tail.fitted_C1)
        r.value2 = *tail.fitted_C1 * std::exp(-*tail.fitted_C2 * lambdas[k] / s.value);
      r.set_witness(s.witness);
      r.verdict = "tail";
    }
    auto& r = out.add();
    r.id = "fit";
    if (tail.fitted_C1) {
      r.value = *tail.fitted_C1;
      r.value2 = *tail.fitted_C2;
    }
    r.set_witness(s.witness);
    r.verdict = tail.holds ? "holds" : "no-fit";
  } else if (a == "sarason") {
    const auto p = sarason_modulus(w, scales, policy);
    out.profile(p, to_string(classify(p)));
  } else if (a == "mitsis") {
    const auto p = mitsis_modulus(w, scales, policy);
    out.profile(p, to_string(classify(p)));
  } else if (a == "doubling") {
    auto ps = PairSweep::from_scales(cfg.window, scales, policy);
    ps.step_divisor = 2 * cfg.sweep_step;
    const auto d = doubling_constant(w, ps);
    auto& r = out.add();
    r.id = "pair";
    r.value = d.constant;
    r.witness_lo = d.left.lo();
    r.witness_hi = d.right.hi();
    r.floor = 1.0;
    r.verdict = std::isfinite(d.constant) ? "finite" : "diverged";
  } else if (a == "ap") {
    for (double p : cfg.ap_p) {
      const auto rep = ap_constant(w, p, sweep);
      auto& r = out.add();
      r.id = "p=" + format_number(p);
      r.value = rep.diverged ? std::numeric_limits<double>::infinity() : rep.constant;
      r.set_witness(rep.witness);
      r.floor = 1.0;
      r.verdict = rep.diverged ? "diverged" : "finite";
    }
  } else if (a == "ainfty") {
    const auto rep = ainfty_constant(w, sweep);
    auto& r = out.add();
    r.id = "sup";
    r.value = rep.diverged ? std::numeric_limits<double>::infinity() : rep.constant;
    r.set_witness(rep.witness);
    r.floor = 1.0;
    r.verdict = rep.diverged ? "diverged" : "finite";
  } else if (a == "lemma32") {
    const auto rep = lemma_vanish_check(w, cfg.x0, cfg.t, cfg.lemma_n);
    const Interval I(cfg.x0 - cfg.t, cfg.x0 + cfg.t);
    auto& ra = out.add();
    ra.scale = cfg.t;
    ra.id = "a:n=" + std::to_string(cfg.lemma_n);
    ra.value = rep.measured_epsilon;
    ra.value2 = rep.min_margin_a;
    ra.set_witness(I);
    ra.verdict = lemma_verdict(rep.status);
    auto& rb = out.add();
    rb.scale = cfg.t;
    rb.id = "b:positions=" + std::to_string(rep.b_position.size());
    rb.value = rep.measured_epsilon;
    rb.value2 = rep.min_margin_b;
    rb.set_witness(I);
    rb.verdict = lemma_verdict(rep.status);
  } else if (a == "lambda-criterion") {
    const auto c = lambda_integral_criterion(w, cfg.scale_hi, scales, policy);
    out.profile(c.modulus, "profile");
    auto& r = out.add();
    r.id = "integral";
    r.value = c.estimate;
    if (std::isfinite(c.tail_slope)) r.value2 = c.tail_slope;
    r.floor = 0.0;
    r.verdict = to_string(c.trend);
  } else if (a == "eta") {
    const BoxPoint z{cfg.x0, cfg.t};
    auto& r = out.add();
    r.scale = cfg.t;
    r.id = "z=(" + format_number(cfg.x0) + ";" + format_number(cfg.t) + ")";
    r.value = eta(w, z);
    r.value2 = eta_tilde(w, z);
    r.set_witness(z.interval());
    r.floor = 0.0;
    r.verdict = "ok";
  } else if (a == "carleson") {
    const auto rep = carleson_report(w, scales, sweep_box_quadrature, cfg.sweep_step);
    out.profile(rep.modulus, to_string(classify(rep.modulus)), rep.quadrature);
  } else if (a == "decomposition") {
    for (int n : cfg.decomposition_n) {
      const auto d = decomposition_diagnostics(w, cfg.x0, cfg.t, n, point_q);
      const auto add_term = [&](const std::string& name, double v) {
        auto& r = out.add();
        r.scale = cfg.t;
        r.id = "N=" + std::to_string(n) + ":" + name;
        r.value = v;
        r.set_witness(Interval::centered(cfg.x0, cfg.t));
        r.depth = d.quadrature.depth;
        r.panels = d.quadrature.x_panels;
        r.verdict = "term";
        return &r;
      };
      add_term("A_total", d.A_total);
      add_term("A1_hat", d.A1_hat);
      add_term("A2_hat", d.A2_hat);
      add_term("A3", d.A3);
      add_term("A4", d.A4);
      add_term("residual", d.residual)->verdict = "residual";
    }
  } else if (a == "area") {
    const AreaQuadrature q{};
    const auto rep = area_square_average(w, Interval::centered(cfg.x0, cfg.t), q);
    const auto add_term = [&](const std::string& name, double v, std::optional<double> v2,
                              const std::string& verdict) {
      auto& r = out.add();
      r.scale = cfg.t;
      r.id = name;
      r.value = v;
      r.value2 = v2;
      r.set_witness(rep.interval);
      r.depth = q.depth;
      r.panels = q.x_panels;
      r.verdict = verdict;
    };
    add_term("area_square", rep.area_square, rep.identity_residual, "residual");
    add_term("box_average", rep.box_average, std::nullopt, "term");
    add_term("B1", rep.B1, 2.0 * rep.epsilon_prime, rep.b_bounds_hold() ? "bounded" : "exceeds");
    add_term("B21", rep.B21, 2.0 * rep.epsilon_prime, rep.b_bounds_hold() ? "bounded" : "exceeds");
    add_term("B22", rep.B22, 2.0 * rep.epsilon_prime, rep.b_bounds_hold() ? "bounded" : "exceeds");
    add_term("B3", rep.B3, 2.0 * rep.epsilon_prime, rep.b_bounds_hold() ? "bounded" : "exceeds");
    add_term("bounded_ratio", rep.bounded_ratio, 8.0, rep.bounded_ratio < 8.0 ? "bounded" : "exceeds");
  } else if (a == "theorem-check") {
    const auto v = theorem_check(w, scales, sweep_box_quadrature, policy);
    if (!v.screen_passed) {
      auto& r = out.add();
      r.id = "ainfty-screen";
      r.value = std::numeric_limits<double>::infinity();
      if (v.ainfty) r.set_witness(v.ainfty->witness);
      r.floor = 1.0;
      r.verdict = "not-ainfty";
      return;
    }
    const std::string agreement = v.consistent ? "/consistent" : "/inconsistent";
    const auto summary = [&](const std::string& id, const OscillationProfile& p, ModulusClass c,
                             std::optional<BoxQuadrature> q) {
      auto& r = out.add();
      const auto& small = p.smallest_scale();
      r.scale = small.scale;
      r.id = id;
      r.value = small.value;
      r.value2 = p.largest_scale().value;
      r.set_witness(small.witness);
      r.floor = p.floor;
      if (q) {
        r.depth = q->depth;
        r.panels = q->x_panels;
      }
      r.verdict = std::string(to_string(c)) + agreement;
    };
    summary("mitsis", v.mitsis, v.mitsis_class, std::nullopt);
    summary("carleson", v.carleson, v.carleson_class, sweep_box_quadrature);
    summary("lambda", v.doubling, v.doubling_class, std::nullopt);
  } else if (a == "cone-box") {
    const auto rep = cone_box_equivalence(w, scales, sweep_area_quadrature, sweep_box_quadrature,
                                          cfg.sweep_step);
    out.profile(rep.area, to_string(rep.area_class), std::nullopt, "area");
    for (std::size_t i = rows.size() - rep.area.entries.size(); i < rows.size(); ++i) {
      rows[i].depth = sweep_area_quadrature.depth;
      rows[i].panels = sweep_area_quadrature.x_panels;
    }
    out.profile(rep.carleson, to_string(rep.carleson_class), sweep_box_quadrature, "carleson");
    auto& r = out.add();
    r.id = "agreement";
    r.verdict = rep.agree ? "agree" : "mixed";
  } else {
    throw config_error(config_error::kind::unknown_analysis, "analyses", 0,
                       "unknown analysis '" + a + "'");
  }
}

}  // namespace detail

/// Builds the weight and runs every requested analysis. Failures become rows
/// with an "error: ..." verdict; the status is the exit code for the worst
/// failure (config 2, analysis 3, I/O 4).
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult res;
  std::optional<Weight> w;
  try {
    w.emplace(make_weight(cfg.weight, cfg.window, cfg.cells));
  } catch (const error& e) {
    ReportRow r;
    r.analysis = "weight";
    r.weight = cfg.weight;
    r.verdict = std::string("error: ") + e.what();
    res.rows.push_back(std::move(r));
    res.status = dynamic_cast<const io_error*>(&e) ? exit_io : exit_config;
    return res;
  }
  for (const auto& a : cfg.analyses) {
    const std::size_t before = res.rows.size();
    try {
      detail::run_analysis(a, cfg, *w, res.rows);
    } catch (const std::exception& e) {
      res.rows.resize(before);
      ReportRow r;
      r.analysis = a;
      r.weight = cfg.weight;
      r.verdict = std::string("error: ") + e.what();
      res.rows.push_back(std::move(r));
      if (res.status == exit_ok) res.status = exit_analysis;
    }
  }
  return res;
}

}  // namespace weightlab
