#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>

#include <varex/exponent.hpp>
#include <varex/extended_real.hpp>

#include "support.hpp"

using namespace varex;
using testsupport::interval_grid;
using testsupport::square_grid;
using testsupport::unit_interval;

TEST_CASE("exponent samples live at cell midpoints") {
  Grid g = unit_interval(5);  // cells at midpoints 0.125, 0.375, 0.625, 0.875
  auto p = make_exponent(g, [](double x, double) { return 2.0 + x; });
  CHECK(p[0] == 2.125);
  CHECK(p[3] == 2.875);
  CHECK(p.p_minus() == 2.125);
  CHECK(p.p_max() == 2.875);

  Grid g2 = square_grid(3, 3);
  auto p2 = make_exponent(g2, [](double x, double y) { return 2.0 + x * y; });
  CHECK(p2[0] == 2.0 + 0.25 * 0.25);
  CHECK(p2[3] == 2.0 + 0.75 * 0.75);
}

TEST_CASE("exponent validation names the offending cell") {
  Grid g = unit_interval(5);
  CHECK_THROWS_AS(make_exponent(g, [](double, double) { return 1.0; }),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_exponent(g, [](double, double) { return 0.5; }),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      make_exponent(g, [](double x, double) { return x < 0.5 ? 2.0 : std::nan(""); }),
      std::invalid_argument);
  try {
    make_exponent(g, [](double x, double) { return x > 0.8 ? 1.0 : 3.0; });
    CHECK(false);
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("cell") != std::string::npos);
  }

  // p slightly above 1 is accepted; exactly 1 is not.
  auto p = make_exponent(g, [](double, double) { return 1.0 + 1e-9; });
  CHECK(p.p_minus() > 1.0);
}

TEST_CASE("unbounded exponents sharpen under refinement") {
  // p(x) = 1/x on (0, 1/2): the finest midpoint decides p_max, so refining
  // the grid must raise it.
  auto field = [](int n) {
    Grid g = interval_grid(0.0, 0.5, n);
    return make_exponent(g, [](double x, double) { return 1.0 / x; });
  };
  auto p64 = field(65);
  auto p128 = field(129);
  CHECK(p64.p_max() == 1.0 / (0.25 / 64.0));  // first midpoint at h/2
  CHECK(p128.p_max() > p64.p_max());
  CHECK(p64.p_minus() > 2.0);  // last midpoint just below 1/2
}

TEST_CASE("dirichlet admissibility gate: p_minus strictly above dim") {
  // In 1D any valid exponent passes (samples must exceed 1 anyway).
  Grid g1 = unit_interval(9);
  CHECK(admissible_for_dirichlet(testsupport::const_exponent(g1, 1.5), 1));
  CHECK(admissible_for_dirichlet(testsupport::const_exponent(g1, 1.0 + 1e-9), 1));

  Grid g2 = square_grid(5, 5);
  CHECK(admissible_for_dirichlet(testsupport::const_exponent(g2, 2.5), 2));
  CHECK(!admissible_for_dirichlet(testsupport::const_exponent(g2, 2.0), 2));
  CHECK(admissible_for_dirichlet(testsupport::const_exponent(g2, 2.0 + 1e-9), 2));
}

TEST_CASE("exponential integrability: constant exponent closed forms") {
  // integral of exp(q)/q over (0,1/2) with q = 2 is e^2/4 (cell-constant
  // integrand, so quadrature is exact up to summation rounding).
  Grid half = interval_grid(0.0, 0.5, 33);
  ExtendedReal v = exp_integrability_check(testsupport::const_exponent(half, 2.0));
  REQUIRE(v.is_finite());
  CHECK(v.value() == doctest::Approx(std::exp(2.0) / 4.0).epsilon(1e-14));

  // Same check over (0,1) with q just above 1.
  Grid unit = unit_interval(33);
  auto q2 = make_exponent(unit, [](double, double) { return 1.0001; });
  ExtendedReal v2 = exp_integrability_check(q2);
  REQUIRE(v2.is_finite());
  CHECK(v2.value() ==
        doctest::Approx(std::exp(1.0001) / 1.0001).epsilon(1e-14));
}

TEST_CASE("exponential integrability: 1/x blows up under refinement") {
  auto check_at = [](int n) {
    Grid g = interval_grid(0.0, 0.5, n);
    auto q = make_exponent(g, [](double x, double) { return 1.0 / x; });
    return exp_integrability_check(q);
  };
  // 65 nodes: finest midpoint gives q = 256, exp(256) huge but finite.
  // 129 nodes: q = 512, still finite, strictly larger integral.
  // 257 nodes: q = 1024, exp overflows, the check must report +infinity.
  ExtendedReal a = check_at(65);
  ExtendedReal b = check_at(129);
  REQUIRE(a.is_finite());
  REQUIRE(b.is_finite());
  CHECK(a.value() > 1e50);
  CHECK(b.value() > a.value());
  CHECK(!check_at(257).is_finite());
}
