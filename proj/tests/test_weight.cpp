#include <catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "generators.hpp"

using namespace weightlab;
using Catch::Approx;

namespace {
const Interval window(-4.0, 4.0);
Weight abs_x() { return Weight(AnalyticWeight::power(0.0, 1.0), window); }
}  // namespace

TEST_CASE("mass examples") {
  CHECK(Weight(AnalyticWeight::constant(1.0), window).mass(0.0, 2.0) == 2.0);
  CHECK(abs_x().mass(1.0, 3.0) == Approx(4.0).epsilon(1e-15));
  const Weight s(sample_density(GridSpec(window, std::size_t{1} << 20),
                                [](double x) { return std::abs(x); }));
  CHECK(std::abs(s.mass(1.0, 3.0) - 4.0) < 1e-9);
}

TEST_CASE("mass outside the working domain is a domain error") {
  CHECK_THROWS_AS(abs_x().mass(3.0, 5.0), domain_error);
  CHECK_THROWS_AS(primitive_homeomorphism(abs_x(), 0.0, 4.5), domain_error);
}

TEST_CASE("average density examples") {
  CHECK(average_density(Weight(AnalyticWeight::constant(3.5), window), Interval(-2.0, 1.0)) ==
        Approx(3.5));
  CHECK(average_density(abs_x(), Interval(0.0, 1.0)) == Approx(0.5));
  const Weight st(AnalyticWeight::step(0.5, 1.0, 2.0), window);
  CHECK(average_density(st, Interval(0.0, 1.0)) == Approx(1.5));
}

TEST_CASE("primitive homeomorphism examples") {
  CHECK(primitive_homeomorphism(Weight(AnalyticWeight::constant(2.0), window), 0.0, 3.0) ==
        Approx(6.0));
  CHECK(primitive_homeomorphism(Weight(AnalyticWeight::constant(1.0), window), 5.0, -2.0) ==
        Approx(3.0));
  CHECK(primitive_homeomorphism(abs_x(), 0.0, 2.0) == Approx(2.0));
}

TEST_CASE("primitive homeomorphism is strictly increasing") {
  gen::Source g(11);
  for (const auto& spec : gen::registry_specs()) {
    const Weight w = make_weight(spec, window, 4096);
    for (int i = 0; i < 200; ++i) {
      double a = g.uniform(-3.9, 3.9), b = g.uniform(-3.9, 3.9);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      INFO(spec << " a=" << a << " b=" << b);
      CHECK(primitive_homeomorphism(w, 0.0, a) < primitive_homeomorphism(w, 0.0, b));
    }
  }
}

TEST_CASE("mass additivity, halving and monotonicity over the registry") {
  gen::Source g(7);
  for (const auto& spec : gen::registry_specs()) {
    const Weight w = make_weight(spec, window, 1 << 14);
    for (int i = 0; i < 500; ++i) {
      const Interval I = g.interval(window, 1e-4, 8.0);
      const double b = g.uniform(I.lo(), I.hi());
      const double whole = w.mass(I);
      INFO(spec << " I=(" << I.lo() << "," << I.hi() << ") b=" << b);
      CHECK(std::abs(w.mass(I.lo(), b) + w.mass(b, I.hi()) - whole) <= 1e-12 * whole + 1e-300);
      CHECK(std::abs(w.mass(I.left_half()) + w.mass(I.right_half()) - whole) <= 1e-12 * whole);
      CHECK(w.mass(I.lo(), b) <= whole * (1.0 + 1e-12));
      CHECK(whole >= 0.0);
    }
  }
}

TEST_CASE("sampled masses converge to analytic masses at first order") {
  const Weight exact(AnalyticWeight::expsin(1.0, 3.0, window), window);
  double prev = 0.0;
  for (int k = 10; k <= 14; k += 2) {
    const Weight s(sample_density(GridSpec(window, std::size_t{1} << k),
                                  [&](double x) { return exact.density(x); }));
    double worst = 0.0;
    for (double lo = -3.9; lo < 3.0; lo += 0.137)
      worst = std::max(worst, std::abs(s.mass(lo, lo + 0.71) - exact.mass(lo, lo + 0.71)));
    const double h = 8.0 / static_cast<double>(std::size_t{1} << k);
    CHECK(worst < 4.0 * h);
    if (prev > 0.0) CHECK(worst < prev);
    prev = worst;
  }
}

TEST_CASE("cell-average sampling reproduces grid-aligned masses") {
  const Weight w = abs_x();
  const GridSpec grid(window, 1024);
  const Weight s(sample_cell_averages(grid, w));
  CHECK(s.mass(grid.cell_lo(100), grid.cell_lo(900)) ==
        Approx(w.mass(grid.cell_lo(100), grid.cell_lo(900))).epsilon(1e-13));
}

TEST_CASE("expsin tabulated antiderivative matches direct quadrature") {
  const Weight w(AnalyticWeight::expsin(1.0, 1.0, window), window);
  for (double a = -3.9; a < 3.5; a += 0.31) {
    const double direct = quad::midpoint([&](double x) { return w.density(x); }, a, a + 0.4, 4000);
    CHECK(w.mass(a, a + 0.4) == Approx(direct).epsilon(1e-7));
  }
}

TEST_CASE("power weights below -1 are rejected") {
  CHECK_THROWS_AS(AnalyticWeight::power(0.0, -1.0), argument_error);
  try {
    make_weight("power:0:-1.5", window, 16);
    FAIL("expected a config error");
  } catch (const config_error& e) {
    CHECK(e.which() == config_error::kind::not_integrable);
  }
}

TEST_CASE("sampled weights need positive finite cells") {
  CHECK_THROWS_AS(SampledWeight(GridSpec(window, 2), {1.0, 0.0}), argument_error);
  CHECK_THROWS_AS(SampledWeight(GridSpec(window, 2), {1.0}), argument_error);
}

TEST_CASE("log integral matches the mean of log density") {
  const Weight w = abs_x();
  // integral of log x over (0, 1) is -1
  CHECK(w.log_integral(0.0, 1.0) == Approx(-1.0));
  const Weight e(AnalyticWeight::expsin(0.5, 2.0, window), window);
  const double direct = quad::midpoint([](double x) { return 0.5 * std::sin(2.0 * x); }, 0.1, 1.3, 20000);
  CHECK(e.log_integral(0.1, 1.3) == Approx(direct).epsilon(1e-8));
}

TEST_CASE("family specs build the expected weights") {
  CHECK(make_weight("constant:2", window, 16).density(0.3) == 2.0);
  CHECK(make_weight("power:0:1", window, 16).density(-0.5) == Approx(0.5));
  CHECK(make_weight("step:0:1:4", window, 16).density(0.1) == 4.0);
  CHECK(make_weight("expsin:1:1", window, 16).density(1.0) == Approx(std::exp(std::sin(1.0))));
  const Weight m = make_weight("martingale:1:0:3:5", window, 64);
  CHECK(m.is_sampled());
  // eight dyadic pieces of width 1 on [-4, 4]
  for (int piece = 0; piece < 8; ++piece)
    CHECK(m.density(-4.0 + piece + 0.1) == m.density(-4.0 + piece + 0.9));
  CHECK(make_weight("martingale:1:0:3:5", window, 64).density(0.5) == m.density(0.5));

  auto kind_of = [](const std::string& spec) {
    try {
      make_weight(spec, window, 16);
    } catch (const config_error& e) {
      return e.which();
    }
    return config_error::kind::bad_value;
  };
  CHECK(kind_of("bogus:1") == config_error::kind::unknown_family);
  CHECK(kind_of("power:0:x") == config_error::kind::malformed_number);
  CHECK(kind_of("power:0") == config_error::kind::bad_value);
}

TEST_CASE("sampled family reads and resamples a CSV") {
  const auto path = std::filesystem::temp_directory_path() / "weightlab_sampled.csv";
  {
    std::ofstream f(path);
    f << "x,density\n-4,1\n0,3\n4,1\n";
  }
  const Weight w = make_weight("sampled:" + path.string(), window, 8);
  CHECK(w.density(-3.5) == Approx(1.25));
  CHECK(w.density(0.5) == Approx(2.75));
  CHECK(w.mass(-4.0, 4.0) == Approx(16.0));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(make_weight("sampled:/nonexistent/file.csv", window, 8), io_error);
}
