#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include <varex/modular.hpp>

#include "support.hpp"

using namespace varex;
using testsupport::const_exponent;
using testsupport::const_function;
using testsupport::interval_grid;
using testsupport::unit_interval;

TEST_CASE("closed-form modular values for constant data") {
  // u = 1 on (0,1), p = 2: integrand is 1/2 (weighted) or 1 (plain); with
  // dyadic spacing every cell term is exact, so the sums are exact too.
  Grid g = unit_interval(5);
  auto u = const_function(g, 1.0);
  auto p = const_exponent(g, 2.0);
  CHECK(modular_eval(ModularKind::RHO_P, u, p).value() == 0.5);
  CHECK(modular_eval(ModularKind::ETA_P, u, p).value() == 1.0);
  CHECK(modular_eval(ModularKind::RHO_GRAD, u, p).value() == 0.0);
  CHECK(modular_eval(ModularKind::ETA_GRAD, u, p).value() == 0.0);
  CHECK(modular_eval(ModularKind::RHO_1P, u, p).value() == 0.5);
}

TEST_CASE("full modular of the identity function") {
  // u(x) = x on (0,1), p = 2: the value part integrates midpoint squares
  // (1/3 - h^2/12), the gradient part is exactly 1/2.
  Grid g = unit_interval(17);
  auto u = GridFunction::sample(g, [](double x, double) { return x; });
  auto p = const_exponent(g, 2.0);
  double h = g.spacing(0);
  double expected = 0.5 * (1.0 / 3.0 - h * h / 12.0) + 0.5;
  CHECK(modular_eval(ModularKind::RHO_1P, u, p).value() ==
        doctest::Approx(expected).epsilon(1e-14));
  CHECK(modular_eval(ModularKind::RHO_GRAD, u, p).value() ==
        doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("modular distance is the modular of the difference") {
  Grid g = unit_interval(9);
  auto u = testsupport::random_zero_boundary(g, 2.0, 5);
  auto v = testsupport::random_zero_boundary(g, 2.0, 6);
  auto p = const_exponent(g, 2.5);
  CHECK(modular_distance(ModularKind::RHO_1P, u, v, p).value() ==
        modular_eval(ModularKind::RHO_1P, u - v, p).value());
  CHECK(modular_distance(ModularKind::RHO_1P, u, u, p).value() == 0.0);
}

TEST_CASE("saturation reports +infinity instead of overflowing") {
  Grid g = unit_interval(5);
  auto u = const_function(g, 3.0);
  auto p = const_exponent(g, 700.0);  // 700 log 3 > 709
  CHECK(!modular_eval(ModularKind::RHO_P, u, p).is_finite());
  CHECK(!modular_eval(ModularKind::ETA_P, u, p).is_finite());
  // The gradient-only modulars stay finite: grad u = 0.
  CHECK(modular_eval(ModularKind::RHO_GRAD, u, p).value() == 0.0);
}

TEST_CASE("doubling ratio is exact for constant exponents") {
  Grid g = unit_interval(9);
  auto u = testsupport::random_zero_boundary(g, 1.5, 77);
  // Scaling u by 2 scales every cell term by exactly 2^p, so the ratio is
  // bitwise 2^p for constant p in {2, 3}.
  CHECK(delta2_ratio(ModularKind::RHO_1P, u, const_exponent(g, 2.0)).value() == 4.0);
  CHECK(delta2_ratio(ModularKind::RHO_1P, u, const_exponent(g, 3.0)).value() == 8.0);
  CHECK(delta2_ratio(ModularKind::ETA_P, u, const_exponent(g, 2.0)).value() == 4.0);
}

TEST_CASE("doubling ratio edge cases") {
  Grid g = unit_interval(5);
  auto p = const_exponent(g, 2.0);

  // Zero base modular: meaningless ratio.
  CHECK_THROWS_AS(delta2_ratio(ModularKind::RHO_P, const_function(g, 0.0), p),
                  std::invalid_argument);

  // Saturated base modular: same.
  CHECK_THROWS_AS(delta2_ratio(ModularKind::RHO_P, const_function(g, 3.0),
                               const_exponent(g, 700.0)),
                  std::invalid_argument);

  // Finite base, saturated doubled modular: ratio is +infinity.
  // 1000 log 1.5 ~ 405 (finite), 1000 log 3 ~ 1099 (saturated).
  auto big = delta2_ratio(ModularKind::ETA_P, const_function(g, 1.5),
                          const_exponent(g, 1000.0));
  CHECK(!big.is_finite());
}

TEST_CASE("luxemburg norm: constant function golden value") {
  // u = 1 on (0,1), p = 2: rho(u/s) = 1/(2 s^2) = 1 at s = 1/sqrt(2).
  Grid g = unit_interval(33);
  auto u = const_function(g, 1.0);
  auto p = const_exponent(g, 2.0);
  double s = luxemburg_norm(ModularKind::RHO_P, u, p);
  CHECK(s == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));

  // The returned value satisfies the defining inequality...
  CHECK(modular_eval(ModularKind::RHO_P, (1.0 / s) * u, p).leq(1.0));
  // ...and is tight: slightly smaller scalings push the modular above 1.
  double s_low = 0.999 * s;
  CHECK(!modular_eval(ModularKind::RHO_P, (1.0 / s_low) * u, p).leq(1.0));
}

TEST_CASE("luxemburg norm: homogeneity and zero function") {
  Grid g = unit_interval(17);
  auto u = testsupport::random_zero_boundary(g, 1.0, 99);
  auto p = const_exponent(g, 3.0);
  double base = luxemburg_norm(ModularKind::RHO_1P, u, p);
  REQUIRE(base > 0.0);
  for (double c : {0.001, 3.0, 1000.0}) {
    double scaled = luxemburg_norm(ModularKind::RHO_1P, c * u, p);
    CHECK(scaled == doctest::Approx(c * base).epsilon(1e-10));
  }
  CHECK(luxemburg_norm(ModularKind::RHO_1P, GridFunction::zeros(g), p) == 0.0);
}

TEST_CASE("luxemburg norm: bracketing through saturated probes") {
  // u = 3, p = 700: the modular at lambda = 1 is +infinity, which the
  // bracketing must treat as "above 1". The exact norm solves
  // (3/s)^700 / 700 = 1, i.e. s = 3 * 700^(-1/700).
  Grid g = unit_interval(5);
  auto u = const_function(g, 3.0);
  auto p = const_exponent(g, 700.0);
  double s = luxemburg_norm(ModularKind::RHO_P, u, p);
  double expected = 3.0 * std::exp(-std::log(700.0) / 700.0);
  CHECK(s == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("modular input validation") {
  Grid g = unit_interval(5);
  Grid g2 = unit_interval(7);
  auto u = const_function(g, 1.0);
  auto p2 = const_exponent(g2, 2.0);
  CHECK_THROWS_AS(modular_eval(ModularKind::RHO_P, u, p2),
                  std::invalid_argument);
  CHECK_THROWS_AS(modular_distance(ModularKind::RHO_P, u,
                                   const_function(g2, 1.0),
                                   const_exponent(g, 2.0)),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      luxemburg_norm(ModularKind::RHO_P, u, const_exponent(g, 2.0), 0.0),
      std::invalid_argument);
  CHECK_THROWS_AS(
      luxemburg_norm(ModularKind::RHO_P, u, const_exponent(g, 2.0), -1e-3),
      std::invalid_argument);
}
