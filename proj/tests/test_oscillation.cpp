#include <catch_amalgamated.hpp>

#include "generators.hpp"

using namespace weightlab;
using Catch::Approx;

namespace {

const Interval window(-4.0, 4.0);

// u(x) = slope * x
struct Linear {
  double slope = 1.0;
  double value(double x) const { return slope * x; }
  double integral(double a, double b) const { return 0.5 * slope * (b * b - a * a); }
  void cuts(double a, double b, std::span<const double> levels, std::vector<double>& out) const {
    for (double l : levels) {
      const double x = l / slope;
      if (a < x && x < b) out.push_back(x);
    }
  }
};

// u = a left of x0, b from x0 on
struct StepField {
  double x0, a, b;
  double value(double x) const { return x < x0 ? a : b; }
  double integral(double lo, double hi) const {
    const double m = std::clamp(x0, lo, hi);
    return a * (m - lo) + b * (hi - m);
  }
  void cuts(double lo, double hi, std::span<const double>, std::vector<double>& out) const {
    if (lo < x0 && x0 < hi) out.push_back(x0);
  }
};

struct Constant {
  double c;
  double value(double) const { return c; }
  double integral(double a, double b) const { return c * (b - a); }
  void cuts(double, double, std::span<const double>, std::vector<double>&) const {}
};

Weight abs_x() { return Weight(AnalyticWeight::power(0.0, 1.0), window); }

// Dense midpoint oracle for the mean oscillation of log|x|.
double brute_oscillation_log_abs(const Interval& I, int n) {
  const double h = I.length() / n;
  double mean = 0.0;
  for (int i = 0; i < n; ++i) mean += std::log(std::abs(I.lo() + (i + 0.5) * h));
  mean /= n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += std::abs(std::log(std::abs(I.lo() + (i + 0.5) * h)) - mean);
  return s / n;
}

}  // namespace

static_assert(ScalarField<Linear>);
static_assert(ScalarField<LogWeight>);
static_assert(ScalarField<Shifted<LogWeight>>);

TEST_CASE("interval mean examples") {
  CHECK(interval_mean(Constant{7.0}, Interval(-1.0, 3.0)) == Approx(7.0));
  CHECK(interval_mean(Linear{}, Interval(0.0, 2.0)) == Approx(1.0));
  const Weight w = abs_x();
  CHECK(interval_mean(LogWeight(w), Interval(0.0, 1.0)) == Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("mean oscillation examples") {
  CHECK(mean_oscillation(Constant{3.0}, Interval(0.0, 1.0)) == 0.0);
  CHECK(mean_oscillation(StepField{0.5, 2.0, 5.0}, Interval(0.0, 1.0)) == Approx(1.5));
  const Weight w = abs_x();
  const double exact = mean_oscillation(LogWeight(w), Interval(-1.0, 1.0));
  CHECK(exact == Approx(2.0 / std::exp(1.0)).epsilon(1e-12));
  CHECK(exact == Approx(brute_oscillation_log_abs(Interval(-1.0, 1.0), 2'000'000)).epsilon(1e-4));
}

TEST_CASE("bmo estimate examples") {
  const IntervalSweep sweep{Interval(-1.0, 1.0), {1.0, 0.5}, 8};
  CHECK(bmo_norm_estimate(Constant{1.0}, sweep).value == 0.0);
  const auto s = bmo_norm_estimate(StepField{0.0, 0.0, 3.0}, sweep);
  CHECK(s.value == Approx(1.5));
  CHECK(s.witness.contains(0.0));
  CHECK_THROWS_AS(bmo_norm_estimate(Constant{1.0}, IntervalSweep{Interval(0.0, 1.0), {}, 8}),
                  argument_error);
}

TEST_CASE("bmo estimate for log|x| is stable under sweep refinement") {
  const Weight w(AnalyticWeight::power(0.0, 1.0), Interval(-1.0, 1.0));
  const auto lengths = std::vector<double>{2.0, 1.0, 0.5, 0.25};
  const double coarse = bmo_norm_estimate(LogWeight(w), IntervalSweep{w.domain(), lengths, 8}).value;
  const double fine = bmo_norm_estimate(LogWeight(w), IntervalSweep{w.domain(), lengths, 16}).value;
  CHECK(coarse > 0.0);
  CHECK(std::abs(fine - coarse) <= 0.05 * coarse);
  CHECK(fine >= coarse);
}

TEST_CASE("vmo modulus examples") {
  const auto scales = log_scales(1.0, 0.01, 5);
  const auto zero = vmo_modulus(Constant{2.0}, window, scales);
  for (const auto& e : zero.entries) CHECK(e.value == 0.0);

  const double L = 3.0;
  const auto lin = vmo_modulus(Linear{L}, window, scales);
  for (const auto& e : lin.entries) CHECK(e.value <= L * e.scale / 2.0 + 1e-12);

  const Weight w = abs_x();
  const auto p = vmo_modulus(LogWeight(w), window, scales);
  // the oscillation of log|x| on (0, d) is 2/e for every d
  for (const auto& e : p.entries) CHECK(e.value >= 2.0 / std::exp(1.0) - 1e-12);
}

TEST_CASE("profiles are nonincreasing as the scale shrinks and respect floors") {
  const auto scales = log_scales(1.0, 0.01, 6);
  for (const auto& spec : gen::registry_specs()) {
    const Weight w = make_weight(spec, window, 4096);
    INFO(spec);
    const auto v = vmo_modulus(LogWeight(w), window, scales);
    const auto m = mitsis_modulus(w, scales);
    const auto s = sarason_modulus(w, scales);
    for (std::size_t i = 1; i < scales.size(); ++i) {
      CHECK(v.entries[i].value <= v.entries[i - 1].value);
      CHECK(m.entries[i].value <= m.entries[i - 1].value);
      CHECK(s.entries[i].value <= s.entries[i - 1].value);
    }
    for (const auto& e : m.entries) CHECK(e.value >= 1.0 - 1e-12);
    for (const auto& e : s.entries) CHECK(e.value >= 1.0 - 1e-12);
    for (const auto& e : v.entries) CHECK(e.value >= 0.0);
  }
}

TEST_CASE("oscillation is translation invariant in u") {
  const Weight w(AnalyticWeight::expsin(1.0, 2.0, window), window);
  const auto scales = log_scales(1.0, 0.05, 4);
  const auto a = vmo_modulus(LogWeight(w), window, scales);
  const auto b = vmo_modulus(Shifted<LogWeight>(LogWeight(w), 3.25), window, scales);
  for (std::size_t i = 0; i < scales.size(); ++i)
    CHECK(b.entries[i].value == Approx(a.entries[i].value).margin(1e-12));
}

TEST_CASE("mean oscillation is nonnegative and zero only for constants") {
  gen::Source g(3);
  for (const auto& spec : gen::registry_specs()) {
    const Weight w = make_weight(spec, window, 4096);
    for (int i = 0; i < 300; ++i) {
      const Interval I = g.interval(window, 1e-3, 4.0);
      const double m = mean_oscillation(LogWeight(w), I);
      CHECK(m >= 0.0);
      if (spec == "constant:1") CHECK(m == 0.0);
    }
  }
}

TEST_CASE("John-Nirenberg tail examples") {
  const auto c = jn_tail(Constant{1.0}, Interval(0.0, 1.0), {0.1, 0.2}, 1.0);
  CHECK(c.tail_fractions == std::vector<double>{0.0, 0.0});
  CHECK_FALSE(c.fitted_C1.has_value());

  const auto s = jn_tail(StepField{0.5, 0.0, 1.0}, Interval(0.0, 1.0), {0.4}, 0.5);
  CHECK(s.tail_fractions[0] == Approx(1.0));

  // |log|x| + 1| >= lambda on (-1, 1): measure fraction (1 - e^(lambda-1))_+ + e^(-1-lambda)
  const Weight w(AnalyticWeight::power(0.0, 1.0), Interval(-1.0, 1.0));
  std::vector<double> lambdas;
  for (int k = 1; k <= 24; ++k) lambdas.push_back(0.25 * k);
  const auto t = jn_tail(LogWeight(w), w.domain(), lambdas, 2.0 / std::exp(1.0));
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    const double l = lambdas[k];
    const double oracle = std::max(0.0, 1.0 - std::exp(l - 1.0)) + std::exp(-1.0 - l);
    CHECK(t.tail_fractions[k] == Approx(oracle).margin(1e-12));
  }
  for (std::size_t k = 1; k < lambdas.size(); ++k) CHECK(t.tail_fractions[k] <= t.tail_fractions[k - 1]);
  REQUIRE(t.fitted_C2.has_value());
  CHECK(*t.fitted_C2 > 0.0);
  CHECK(t.holds);
}

TEST_CASE("John-Nirenberg tail at lambda 0 is the measure where u differs from its mean") {
  const Weight w(AnalyticWeight::expsin(1.0, 1.0, window), window);
  const auto t = jn_tail(LogWeight(w), Interval(-1.0, 2.0), {0.0, 0.1, 0.5}, 1.0);
  CHECK(t.tail_fractions[0] == Approx(1.0));
  CHECK_THROWS_AS(jn_tail(LogWeight(w), Interval(-1.0, 2.0), {0.5, 0.1}, 1.0), argument_error);
}

TEST_CASE("Sarason product examples") {
  const Weight c(AnalyticWeight::constant(4.0), window);
  CHECK(sarason_product(c, Interval(0.0, 1.0)).value == Approx(1.0));
  const Weight st(AnalyticWeight::step(0.5, 1.0, 2.0), window);
  CHECK(sarason_product(st, Interval(0.0, 1.0)).value == Approx(9.0 / 8.0));
  const Weight sq(AnalyticWeight::power(0.0, 0.5), window);
  CHECK(sarason_product(sq, Interval(0.0, 1.0)).value == Approx(4.0 / 3.0));
  const auto d = sarason_product(abs_x(), Interval(-1.0, 1.0));
  CHECK(d.diverged);
}

TEST_CASE("Mitsis ratio examples") {
  const Weight c(AnalyticWeight::constant(4.0), window);
  CHECK(mitsis_ratio(c, Interval(0.0, 1.0)).value == Approx(1.0));
  const Weight st(AnalyticWeight::step(0.5, 1.0, 2.0), window);
  CHECK(mitsis_ratio(st, Interval(0.0, 1.0)).value == Approx(1.5 / std::sqrt(2.0)));
  CHECK(mitsis_ratio(abs_x(), Interval(0.0, 1.0)).value == Approx(std::exp(1.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("Sarason and Mitsis moduli examples") {
  const auto scales = log_scales(0.5, 0.005, 6);
  const Weight c(AnalyticWeight::constant(2.0), window);
  for (const auto& e : mitsis_modulus(c, scales).entries) CHECK(e.value == Approx(1.0));
  for (const auto& e : sarason_modulus(c, scales).entries) CHECK(e.value == Approx(1.0));

  const Weight smooth(AnalyticWeight::expsin(1.0, 1.0, window), window);
  const auto m = mitsis_modulus(smooth, scales);
  CHECK(m.smallest_scale().value - 1.0 < 1e-4);
  CHECK(m.smallest_scale().value < m.largest_scale().value);

  const auto p = mitsis_modulus(abs_x(), scales);
  for (const auto& e : p.entries) CHECK(e.value >= std::exp(1.0) / 2.0 - 1e-9);
  const auto s = sarason_modulus(abs_x(), scales);
  for (const auto& e : s.entries) CHECK(e.diverged);
}

TEST_CASE("Jensen chain and scale invariance of the Mitsis ratio") {
  gen::Source g(5);
  for (const auto& spec : gen::registry_specs()) {
    const Weight w = make_weight(spec, window, 1 << 14);
    const Weight inv = w.powered(-1.0);
    const Weight scaled = w.scaled(17.5);
    for (int i = 0; i < 300; ++i) {
      const Interval I = g.interval(window, 1e-3, 8.0);
      const auto s = sarason_product(w, inv, I);
      const auto m = mitsis_ratio(w, I);
      INFO(spec << " I=(" << I.lo() << "," << I.hi() << ")");
      CHECK(m.value >= 1.0 - 1e-12);
      if (!s.diverged) CHECK(s.value >= m.value * (1.0 - 1e-12));
      CHECK(mitsis_ratio(scaled, I).value == Approx(m.value).epsilon(1e-11));
    }
  }
}

TEST_CASE("Sarason and Mitsis moduli agree on whether they reach 1") {
  const auto scales = log_scales(0.5, 0.005, 6);
  for (const auto& spec : gen::registry_specs()) {
    const Weight w = make_weight(spec, window, 1 << 14);
    const auto s = sarason_modulus(w, scales);
    const auto m = mitsis_modulus(w, scales);
    INFO(spec);
    const bool s_small = !s.smallest_scale().diverged && s.smallest_scale().value - 1.0 < 0.02;
    const bool m_small = m.smallest_scale().value - 1.0 < 0.02;
    CHECK(s_small == m_small);
  }
}
