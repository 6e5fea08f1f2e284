#include <doctest.h>

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <varex/grid.hpp>

#include "support.hpp"

using namespace varex;
using testsupport::interval_grid;
using testsupport::square_grid;
using testsupport::unit_interval;

TEST_CASE("interval grid basics") {
  Grid g = unit_interval(3);
  CHECK(g.dim() == 1);
  CHECK(g.node_count() == 3);
  CHECK(g.cell_count() == 2);
  CHECK(g.spacing(0) == 0.5);
  CHECK(g.cell_measure() == 0.5);
  CHECK(g.node_coord(0)[0] == 0.0);
  CHECK(g.node_coord(1)[0] == 0.5);
  CHECK(g.node_coord(2)[0] == 1.0);
  CHECK(g.cell_midpoint(0)[0] == 0.25);
  CHECK(g.is_boundary_node(0));
  CHECK(!g.is_boundary_node(1));
  CHECK(g.is_boundary_node(2));
  CHECK(g.interior_nodes() == std::vector<std::size_t>{1});
}

TEST_CASE("square grid counts and corner order") {
  Grid g = square_grid(3, 3);
  CHECK(g.dim() == 2);
  CHECK(g.node_count() == 9);
  CHECK(g.cell_count() == 4);
  CHECK(g.cell_measure() == 0.25);
  CHECK(g.interior_nodes() == std::vector<std::size_t>{4});

  // Corner order contract: lower-left, lower-right, upper-left, upper-right.
  std::size_t c[4];
  CHECK(g.cell_corners(g.cell_index(1, 1), c) == 4);
  CHECK(c[0] == g.node_index(1, 1));
  CHECK(c[1] == g.node_index(2, 1));
  CHECK(c[2] == g.node_index(1, 2));
  CHECK(c[3] == g.node_index(2, 2));

  // Node indexing is x-fastest.
  CHECK(g.node_index(2, 1) == 5);
  CHECK(g.node_coord(5)[0] == 1.0);
  CHECK(g.node_coord(5)[1] == 0.5);
}

TEST_CASE("degenerate grids are rejected") {
  CHECK_THROWS_AS(build_grid(Domain::interval(0.0, 1.0), {2, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_grid(Domain::rectangle(0, 1, 0, 1), {3, 2}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_grid(Domain::interval(1.0, 1.0), {3, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_grid(Domain::interval(2.0, 1.0), {3, 1}),
                  std::invalid_argument);
}

TEST_CASE("grid equality") {
  CHECK(unit_interval(5) == unit_interval(5));
  CHECK(unit_interval(5) != unit_interval(7));
  CHECK(unit_interval(5) != interval_grid(0.0, 2.0, 5));
  CHECK(square_grid(3, 5) != square_grid(5, 3));
}

TEST_CASE("gradient is exact for affine functions") {
  Grid g1 = unit_interval(9);
  auto u1 = GridFunction::sample(g1, [](double x, double) { return 3 * x - 1; });
  GradientField f1 = gradient(u1);
  for (std::size_t c = 0; c < g1.cell_count(); ++c) {
    CHECK(f1.vectors[c][0] == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(f1.vectors[c][1] == 0.0);
  }

  Grid g2 = square_grid(4, 6);
  auto u2 = GridFunction::sample(
      g2, [](double x, double y) { return 2 * x - 3 * y + 0.5; });
  GradientField f2 = gradient(u2);
  for (std::size_t c = 0; c < g2.cell_count(); ++c) {
    CHECK(f2.vectors[c][0] == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(f2.vectors[c][1] == doctest::Approx(-3.0).epsilon(1e-14));
  }
}

TEST_CASE("gradient of a constant vanishes and gradient is linear") {
  Grid g = square_grid(5, 5);
  auto c = testsupport::const_function(g, 4.25);
  for (auto& v : gradient(c).vectors) {
    CHECK(v[0] == 0.0);
    CHECK(v[1] == 0.0);
  }

  auto u = testsupport::random_zero_boundary(g, 1.0, 11);
  auto v = testsupport::random_zero_boundary(g, 2.0, 22);
  auto lhs = gradient(2.5 * u - v);
  auto gu = gradient(u);
  auto gv = gradient(v);
  for (std::size_t i = 0; i < g.cell_count(); ++i) {
    for (int a = 0; a < 2; ++a) {
      double expect = 2.5 * gu.vectors[i][a] - gv.vectors[i][a];
      CHECK(lhs.vectors[i][a] == doctest::Approx(expect).epsilon(1e-13));
    }
  }
}

TEST_CASE("2d gradient matches the bilinear midpoint derivative") {
  // For u(x,y) = x*y the bilinear interpolant is exact, so the cell gradient
  // must equal (y_mid, x_mid) at every cell midpoint.
  Grid g = square_grid(5, 4);
  auto u = GridFunction::sample(g, [](double x, double y) { return x * y; });
  GradientField f = gradient(u);
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    auto mid = g.cell_midpoint(c);
    CHECK(f.vectors[c][0] == doctest::Approx(mid[1]).epsilon(1e-14));
    CHECK(f.vectors[c][1] == doctest::Approx(mid[0]).epsilon(1e-14));
  }
}

TEST_CASE("cell_average is the corner mean") {
  Grid g = unit_interval(5);
  auto u = GridFunction::sample(g, [](double x, double) { return x * x; });
  // First cell: nodes at 0 and 0.25.
  CHECK(cell_average(u, 0) == 0.5 * (0.0 + 0.0625));

  Grid g2 = square_grid(3, 3);
  auto u2 = GridFunction::sample(g2, [](double x, double y) { return x + 10 * y; });
  std::size_t corners[4];
  g2.cell_corners(0, corners);
  double mean = (u2[corners[0]] + u2[corners[1]] + u2[corners[2]] + u2[corners[3]]) / 4.0;
  CHECK(cell_average(u2, 0) == mean);
}

TEST_CASE("integrate: midpoint rule") {
  Grid g = unit_interval(101);
  std::vector<double> ones(g.cell_count(), 1.0);
  CHECK(integrate(g, ones) == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<double> zeros(g.cell_count(), 0.0);
  CHECK(integrate(g, zeros) == 0.0);

  // Midpoint rule is exact for affine integrands.
  std::vector<double> xs(g.cell_count());
  for (std::size_t c = 0; c < xs.size(); ++c) xs[c] = g.cell_midpoint(c)[0];
  CHECK(integrate(g, xs) == doctest::Approx(0.5).epsilon(1e-12));

  Grid g2 = square_grid(7, 9);
  std::vector<double> ones2(g2.cell_count(), 1.0);
  CHECK(integrate(g2, ones2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("grid function validation") {
  Grid g = unit_interval(3);
  CHECK_THROWS_AS(GridFunction(g, std::vector<double>{1.0, 2.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      GridFunction(g, std::vector<double>{1.0, std::nan(""), 0.0}),
      std::invalid_argument);
  CHECK_THROWS_AS(
      GridFunction(g, std::vector<double>{1.0, HUGE_VAL, 0.0}),
      std::invalid_argument);

  // Arithmetic requires matching grids.
  auto a = GridFunction::zeros(unit_interval(3));
  auto b = GridFunction::zeros(unit_interval(5));
  CHECK_THROWS_AS(a + b, std::invalid_argument);
}
