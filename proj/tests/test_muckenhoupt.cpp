#include <catch_amalgamated.hpp>

#include "generators.hpp"

using namespace weightlab;
using Catch::Approx;

namespace {
const Interval window(-4.0, 4.0);
Weight abs_x() { return Weight(AnalyticWeight::power(0.0, 1.0), window); }

// One-dimensional oracle for |x|: pair (p - L, p), (p, p + L) with a = p / L
// has ratio (2a + 1) / (2a^2 - 2a + 1) for 0 <= a <= 1; maximise densely.
double abs_doubling_oracle() {
  double best = 0.0;
  for (int i = 0; i <= 1'000'000; ++i) {
    const double a = i * 1e-6;
    best = std::max(best, (2 * a + 1) / (2 * a * a - 2 * a + 1));
  }
  return best;
}
}  // namespace

TEST_CASE("doubling constant examples") {
  const auto scales = log_scales(1.0, 0.01, 5);
  const Weight c(AnalyticWeight::constant(3.0), window);
  CHECK(doubling_constant(c, PairSweep::from_scales(window, scales)).constant == Approx(1.0));

  const Weight st(AnalyticWeight::step(0.0, 1.0, 2.0), window);
  const auto d = doubling_constant(st, PairSweep::from_scales(window, scales));
  CHECK(d.constant == Approx(2.0));
  CHECK(d.left.hi() == Approx(0.0).margin(1e-12));

  const double oracle = abs_doubling_oracle();
  CHECK(oracle == Approx(2.0 + std::sqrt(5.0)).epsilon(1e-9));
  const auto r = doubling_constant(abs_x(), PairSweep::from_scales(window, scales));
  CHECK(std::abs(r.constant - oracle) <= 0.01 * oracle);
  CHECK(r.constant <= oracle * (1.0 + 1e-12));
  CHECK(r.left.length() == Approx(r.right.length()));
  CHECK(r.left.hi() == r.right.lo());
  const double a = abs_x().mass(r.left), b = abs_x().mass(r.right);
  CHECK(std::max(a / b, b / a) == Approx(r.constant));
}

TEST_CASE("doubling constant is invariant under scaling the weight") {
  const auto scales = log_scales(1.0, 0.02, 4);
  for (const auto& spec : gen::registry_specs()) {
    const Weight w = make_weight(spec, window, 4096);
    const auto sweep = PairSweep::from_scales(window, scales);
    CHECK(doubling_constant(w.scaled(9.0), sweep).constant ==
          Approx(doubling_constant(w, sweep).constant).epsilon(1e-12));
  }
}

TEST_CASE("vanishing doubling modulus examples") {
  const auto scales = log_scales(1.0, 0.01, 6);
  const Weight c(AnalyticWeight::constant(3.0), window);
  for (const auto& e : vanishing_doubling_modulus(c, scales).entries) CHECK(e.value == Approx(0.0).margin(1e-14));

  // masses y^2/8 and 3y^2/8 on the halves of (0, y)
  CHECK(eta_tilde(abs_x(), BoxPoint(0.25, 0.5)) == Approx(4.0).epsilon(1e-12));
  for (const auto& e : vanishing_doubling_modulus(abs_x(), scales).entries)
    CHECK(e.value >= 4.0 - 1e-9);

  const Weight smooth(AnalyticWeight::expsin(1.0, 1.0, window), window);
  const auto p = vanishing_doubling_modulus(smooth, scales);
  for (const auto& e : p.entries) {
    const double bound = std::expm1(e.scale);
    CHECK(e.value <= bound * bound);
  }
  CHECK(p.smallest_scale().value < p.largest_scale().value);
}

TEST_CASE("vanishing doubling modulus is nondecreasing in delta and invariant under scaling") {
  const auto scales = log_scales(1.0, 0.01, 6);
  for (const auto& spec : gen::registry_specs()) {
    const Weight w = make_weight(spec, window, 4096);
    const auto p = vanishing_doubling_modulus(w, scales);
    const auto q = vanishing_doubling_modulus(w.scaled(0.3), scales);
    INFO(spec);
    for (std::size_t i = 0; i < scales.size(); ++i) {
      CHECK(p.entries[i].value >= 0.0);
      if (i > 0) CHECK(p.entries[i].value <= p.entries[i - 1].value);
      CHECK(q.entries[i].value == Approx(p.entries[i].value).margin(1e-12).epsilon(1e-9));
    }
  }
}

TEST_CASE("vanishing doubling modulus is invariant under translation in the interior") {
  const auto scales = log_scales(0.5, 0.01, 5);
  const Weight a(AnalyticWeight::power(0.0, 1.0), window);
  const Weight b(AnalyticWeight::power(0.5, 1.0), Interval(-3.5, 4.5));
  const auto pa = vanishing_doubling_modulus(a, scales);
  const auto pb = vanishing_doubling_modulus(b, scales);
  for (std::size_t i = 0; i < scales.size(); ++i)
    CHECK(pb.entries[i].value == Approx(pa.entries[i].value).epsilon(1e-9));
}

TEST_CASE("A_p constant examples") {
  const IntervalSweep sweep{window, {1.0, 0.5}, 8};
  const Weight c(AnalyticWeight::constant(3.0), window);
  for (double p : {1.5, 2.0, 4.0}) CHECK(ap_constant(c, p, sweep).constant == Approx(1.0));

  const Weight st(AnalyticWeight::step(0.5, 1.0, 2.0), window);
  CHECK(ap_product(st, Interval(0.0, 1.0), 2.0).value == Approx(9.0 / 8.0));
  const Weight sq(AnalyticWeight::power(0.0, 0.5), window);
  CHECK(ap_product(sq, Interval(0.0, 1.0), 2.0).value == Approx(4.0 / 3.0));
  CHECK_THROWS_AS(ap_product(sq, Interval(0.0, 1.0), 1.0), argument_error);
}

TEST_CASE("A_p product is nonincreasing in p on each interval") {
  gen::Source g(17);
  const std::vector<double> ps{1.25, 1.5, 2.0, 3.0, 6.0};
  for (const auto& spec : gen::registry_specs()) {
    const Weight w = make_weight(spec, window, 4096);
    std::vector<Weight> rp;
    for (double p : ps) rp.push_back(ap_reciprocal(w, p));
    for (int i = 0; i < 100; ++i) {
      const Interval I = g.interval(window, 1e-2, 4.0);
      double prev = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < ps.size(); ++k) {
        const auto r = ap_product(w, rp[k], I, ps[k]);
        INFO(spec << " p=" << ps[k]);
        CHECK(r.value >= 1.0 - 1e-12);
        CHECK(r.value <= prev * (1.0 + 1e-12));
        prev = r.value;
      }
    }
  }
}

TEST_CASE("A_infinity constant examples and Jensen floor") {
  const auto scales = log_scales(1.0, 0.01, 5);
  const auto sweep = IntervalSweep::from_scales(window, scales);
  const Weight c(AnalyticWeight::constant(3.0), window);
  CHECK(ainfty_constant(c, sweep).constant == Approx(1.0));
  CHECK(ainfty_constant(abs_x(), sweep).constant >= std::exp(1.0) / 2.0 - 1e-12);
  const Weight st(AnalyticWeight::step(0.0, 1.0, 2.0), window);
  CHECK(ainfty_constant(st, sweep).constant == Approx(3.0 / (2.0 * std::sqrt(2.0))));
  for (const auto& spec : gen::registry_specs()) {
    const Weight w = make_weight(spec, window, 4096);
    CHECK(ainfty_constant(w, sweep).constant >= 1.0 - 1e-12);
    CHECK(ap_constant(w, 3.0, sweep).constant >= 1.0 - 1e-12);
  }
}

TEST_CASE("A_infinity cell diagnostic is a concentration curve") {
  const auto d = ainfty_cell_diagnostic(abs_x(), Interval(0.0, 1.0), 16);
  REQUIRE(d.size() == 16);
  CHECK(d.back().mass_fraction == Approx(1.0));
  for (std::size_t i = 1; i < d.size(); ++i) CHECK(d[i].mass_fraction >= d[i - 1].mass_fraction);
  // the heaviest cell first: mass fraction >= length fraction
  CHECK(d.front().mass_fraction >= d.front().length_fraction);
}

TEST_CASE("sandwich lemma on a constant weight") {
  const Weight c(AnalyticWeight::constant(2.0), window);
  const auto r = lemma_vanish_check(c, 0.0, 0.1, 8);
  CHECK(r.status == LemmaStatus::passed);
  CHECK(r.measured_epsilon == Approx(0.0).margin(1e-12));
  for (int m = 1; m <= 8; ++m) {
    CHECK(r.a_ratio[m - 1] == Approx(m));
    CHECK(r.a_lower[m - 1] <= m + 1e-9);
    CHECK(r.a_upper[m - 1] >= m - 1e-9);
  }
  for (double b : r.b_ratio) CHECK(b == Approx(1.0));

  const auto o = lemma_vanish_check(c, 0.0, 0.1, 8, 0.05);
  CHECK(o.status == LemmaStatus::passed);
  CHECK(o.min_margin_a >= -1e-12);
  CHECK(o.min_margin_b > 0.0);
}

TEST_CASE("sandwich lemma on exp(0.01 sin x)") {
  const Weight w(AnalyticWeight::expsin(0.01, 1.0, window), window);
  const auto r = lemma_vanish_check(w, 0.3, 0.1, 8);
  CHECK(r.status == LemmaStatus::passed);
  CHECK(r.measured_epsilon > 0.0);
  CHECK(r.min_margin_a >= 0.0);
  CHECK(r.min_margin_b >= 0.0);
}

TEST_CASE("sandwich lemma hypothesis failure is distinct from violation") {
  const Weight st(AnalyticWeight::step(0.0, 1.0, 4.0), window);
  const auto r = lemma_vanish_check(st, 0.0, 0.1, 4, 0.01);
  CHECK(r.status == LemmaStatus::hypothesis_not_met);
}

TEST_CASE("sandwich lemma margins are nonnegative whenever the hypothesis holds") {
  gen::Source g(23);
  for (const auto& spec : gen::registry_specs()) {
    const Weight w = make_weight(spec, window, 1 << 14);
    for (int i = 0; i < 20; ++i) {
      const double t = g.uniform(0.01, 0.2);
      const int n = g.integer(1, 12);
      const double x0 = g.uniform(-3.9 + n * t, 3.9 - n * t);
      const auto r = lemma_vanish_check(w, x0, t, n);
      INFO(spec << " x0=" << x0 << " t=" << t << " n=" << n);
      CHECK(r.status == LemmaStatus::passed);
    }
  }
}

TEST_CASE("lambda integral criterion examples") {
  const auto scales = log_scales(0.5, 0.002, 9);
  const Weight c(AnalyticWeight::constant(1.0), window);
  const auto a = lambda_integral_criterion(c, 0.5, scales);
  CHECK(a.estimate == Catch::Approx(0.0).margin(1e-20));
  CHECK(a.trend == Trend::converging);

  const auto b = lambda_integral_criterion(abs_x(), 0.5, scales);
  CHECK(b.trend == Trend::diverging);
  CHECK(b.estimate >= 4.0 * std::log(0.5 / 0.002) - 1e-9);

  const Weight smooth(AnalyticWeight::expsin(1.0, 1.0, window), window);
  const auto s = lambda_integral_criterion(smooth, 0.5, scales);
  CHECK(s.trend == Trend::converging);
  CHECK(s.tail_slope > 0.1);
}
