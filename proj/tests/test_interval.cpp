#include <catch_amalgamated.hpp>

#include "generators.hpp"

using namespace weightlab;
using Catch::Approx;

TEST_CASE("interval construction and halves") {
  const Interval I(0.0, 2.0);
  CHECK(I.length() == 2.0);
  CHECK(I.midpoint() == 1.0);
  CHECK(I.left_half() == Interval(0.0, 1.0));
  CHECK(I.right_half() == Interval(1.0, 2.0));
  CHECK(Interval::centered(0.5, 1.0) == Interval(0.0, 1.0));
  CHECK_THROWS_AS(Interval(1.0, 1.0), argument_error);
  CHECK_THROWS_AS(Interval(2.0, 1.0), argument_error);
  CHECK_THROWS_AS(Interval(0.0, std::numeric_limits<double>::infinity()), argument_error);
}

TEST_CASE("box point interval and halves") {
  const BoxPoint z(0.3, 0.2);
  CHECK(z.interval().lo() == Approx(0.2));
  CHECK(z.interval().hi() == Approx(0.4));
  CHECK(z.left().hi() == Approx(0.3));
  CHECK_THROWS_AS(BoxPoint(0.0, 0.0), argument_error);
}

TEST_CASE("dyadic boxes: depth 1 is a single level of two boxes") {
  const auto b = dyadic_boxes(Interval(0.0, 1.0), 1);
  REQUIRE(b.size() == 2);
  CHECK(b[0] == BoxPoint(0.25, 0.5));
  CHECK(b[1] == BoxPoint(0.75, 0.5));
}

TEST_CASE("dyadic boxes: depth 2 has heights 1/2 and 1/4 with 2 and 4 boxes") {
  const auto b = dyadic_boxes(Interval(0.0, 1.0), 2);
  REQUIRE(b.size() == 6);
  int half = 0, quarter = 0;
  for (const auto& z : b) {
    if (z.y == 0.5) ++half;
    if (z.y == 0.25) ++quarter;
  }
  CHECK(half == 2);
  CHECK(quarter == 4);
}

TEST_CASE("dyadic boxes: total count 2^(d+1) - 2 and tiling") {
  for (int d = 1; d <= 10; ++d) {
    const auto b = dyadic_boxes(Interval(-1.0, 3.0), d);
    CHECK(b.size() == (std::size_t{1} << (d + 1)) - 2);
    // each level covers the base exactly
    double covered = 0.0;
    for (const auto& z : b) covered += z.y;
    CHECK(covered == Approx(4.0 * d));
  }
  CHECK_THROWS_AS(dyadic_boxes(Interval(0.0, 1.0), 0), argument_error);
}

TEST_CASE("grid spec cells") {
  const GridSpec g(Interval(-4.0, 4.0), 8);
  CHECK(g.cell_width() == 1.0);
  CHECK(g.cell_lo(3) == -1.0);
  CHECK(g.cell_mid(0) == -3.5);
}

TEST_CASE("log scales are decreasing and hit both ends") {
  const auto s = log_scales(0.5, 0.01, 6);
  REQUIRE(s.size() == 6);
  CHECK(s.front() == Approx(0.5));
  CHECK(s.back() == Approx(0.01));
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] < s[i - 1]);
  CHECK_THROWS(require_decreasing({0.1, 0.2}));
}

TEST_CASE("argmax ties resolve to the leftmost then shortest interval") {
  ArgMax<Interval> a;
  a.offer(1.0, Interval(0.5, 1.0), interval_key());
  a.offer(1.0, Interval(0.0, 1.0), interval_key());
  a.offer(1.0, Interval(0.0, 0.5), interval_key());
  CHECK(*a.witness == Interval(0.0, 0.5));
  a.offer(std::numeric_limits<double>::infinity(), Interval(2.0, 3.0), interval_key());
  CHECK(a.diverged);
}
