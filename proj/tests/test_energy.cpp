#include <doctest.h>

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include <varex/energy.hpp>

#include "support.hpp"

using namespace varex;
using testsupport::const_exponent;
using testsupport::random_zero_boundary;
using testsupport::square_grid;
using testsupport::unit_interval;

namespace {

ProblemData identity_problem(int n, double p_const) {
  Grid g = unit_interval(n);
  auto phi = GridFunction::sample(g, [](double x, double) { return x; });
  return ProblemData(const_exponent(g, p_const), phi);
}

}  // namespace

TEST_CASE("problem data validation") {
  Grid g = unit_interval(5);
  Grid g2 = unit_interval(7);
  auto phi = GridFunction::sample(g, [](double x, double) { return x; });

  // Exponent and datum must share the grid.
  CHECK_THROWS_AS(ProblemData(const_exponent(g2, 2.0), phi),
                  std::invalid_argument);

  // Weights: one finite nonnegative entry per cell.
  CHECK_THROWS_AS(
      ProblemData(const_exponent(g, 2.0), phi, std::vector<double>{1.0}),
      std::invalid_argument);
  CHECK_THROWS_AS(ProblemData(const_exponent(g, 2.0), phi,
                              std::vector<double>{1.0, -0.5, 1.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ProblemData(const_exponent(g, 2.0), phi,
                              std::vector<double>{1.0, HUGE_VAL, 1.0, 1.0}),
                  std::invalid_argument);

  // A boundary datum whose full modular saturates is rejected up front.
  auto huge = GridFunction::sample(g, [](double x, double) { return 1e10 * x; });
  CHECK_THROWS_AS(ProblemData(const_exponent(g, 80.0), huge), SaturationError);

  // Valid construction exposes its pieces.
  ProblemData data(const_exponent(g, 2.0), phi,
                   std::vector<double>{1.0, 2.0, 0.0, 1.0});
  CHECK(data.grid() == g);
  CHECK(data.q().has_value());
}

TEST_CASE("energy argument validation") {
  ProblemData data = identity_problem(5, 2.0);
  const Grid& g = data.grid();

  // w must vanish on the boundary...
  std::vector<double> vals(g.node_count(), 0.0);
  vals[0] = 0.5;
  CHECK_THROWS_AS(energy(EnergyKind::F_GRAD, data, GridFunction(g, vals)),
                  std::invalid_argument);
  // ...and live on the data grid.
  CHECK_THROWS_AS(energy(EnergyKind::F_GRAD, data,
                         GridFunction::zeros(unit_interval(9))),
                  std::invalid_argument);
  // The weighted energy needs weights.
  CHECK_THROWS_AS(energy(EnergyKind::J_WEIGHTED, data,
                         GridFunction::zeros(g)),
                  std::invalid_argument);
}

TEST_CASE("exact energy values for the identity datum") {
  // phi(x) = x on (0,1), 5 nodes (dyadic h = 1/4), p = 2, w = 0: every cell
  // term is an exact dyadic rational, so the energies are exact:
  //   F_GRAD       = 1/2
  //   G_UNWEIGHTED = 1
  //   F_FULL       = 1/2 + (sum of midpoint squares)/2 * h = 0.6640625
  //   J (q = 3)    = 3 * 0.1640625 + 0.5 = 0.9921875
  Grid g = unit_interval(5);
  auto phi = GridFunction::sample(g, [](double x, double) { return x; });
  auto p = const_exponent(g, 2.0);
  auto w = GridFunction::zeros(g);

  ProblemData plain(p, phi);
  CHECK(energy(EnergyKind::F_GRAD, plain, w).value() == 0.5);
  CHECK(energy(EnergyKind::G_UNWEIGHTED, plain, w).value() == 1.0);
  CHECK(energy(EnergyKind::F_FULL, plain, w).value() == 0.6640625);

  ProblemData weighted(p, phi, std::vector<double>(g.cell_count(), 3.0));
  CHECK(energy(EnergyKind::J_WEIGHTED, weighted, w).value() == 0.9921875);

  // Zero datum, zero w: all energies vanish.
  ProblemData trivial(p, GridFunction::zeros(g),
                      std::vector<double>(g.cell_count(), 1.0));
  for (EnergyKind kind : {EnergyKind::F_FULL, EnergyKind::F_GRAD,
                          EnergyKind::J_WEIGHTED, EnergyKind::G_UNWEIGHTED}) {
    CHECK(energy(kind, trivial, w).value() == 0.0);
  }
}

TEST_CASE("gateaux gradient matches central differences, 1d") {
  Grid g = unit_interval(9);
  auto phi = GridFunction::sample(g, [](double x, double) { return x * x; });
  auto p = make_exponent(g, [](double x, double) { return 2.0 + x; });
  ProblemData data(p, phi, std::vector<double>(g.cell_count(), 1.0));
  auto w = random_zero_boundary(g, 0.3, 314);

  for (EnergyKind kind : {EnergyKind::F_FULL, EnergyKind::F_GRAD,
                          EnergyKind::J_WEIGHTED, EnergyKind::G_UNWEIGHTED}) {
    GridFunction grad = gateaux_gradient(kind, data, w);
    const double t = 1e-6;
    for (std::size_t node : g.interior_nodes()) {
      std::vector<double> plus(w.values().begin(), w.values().end());
      std::vector<double> minus = plus;
      plus[node] += t;
      minus[node] -= t;
      double ep = energy(kind, data, GridFunction(g, plus)).value();
      double em = energy(kind, data, GridFunction(g, minus)).value();
      double fd = (ep - em) / (2.0 * t);
      CHECK(std::abs(fd - grad[node]) <=
            1e-7 * std::max(1.0, std::abs(grad[node])));
    }
  }
}

TEST_CASE("gateaux gradient matches central differences, 2d") {
  Grid g = square_grid(5, 5);
  auto phi = GridFunction::sample(g, [](double x, double y) { return x * y; });
  auto p = make_exponent(g, [](double x, double y) { return 2.0 + x * y; });
  ProblemData data(p, phi, std::vector<double>(g.cell_count(), 2.0));
  auto w = random_zero_boundary(g, 0.2, 2718);

  for (EnergyKind kind : {EnergyKind::F_FULL, EnergyKind::F_GRAD,
                          EnergyKind::J_WEIGHTED, EnergyKind::G_UNWEIGHTED}) {
    GridFunction grad = gateaux_gradient(kind, data, w);
    const double t = 1e-6;
    for (std::size_t node : g.interior_nodes()) {
      std::vector<double> plus(w.values().begin(), w.values().end());
      std::vector<double> minus = plus;
      plus[node] += t;
      minus[node] -= t;
      double ep = energy(kind, data, GridFunction(g, plus)).value();
      double em = energy(kind, data, GridFunction(g, minus)).value();
      double fd = (ep - em) / (2.0 * t);
      CHECK(std::abs(fd - grad[node]) <=
            1e-7 * std::max(1.0, std::abs(grad[node])));
    }
  }
}

TEST_CASE("gradient vanishes on the boundary") {
  Grid g = square_grid(6, 5);
  auto phi = GridFunction::sample(
      g, [](double x, double y) { return std::sin(x) + y; });
  ProblemData data(const_exponent(g, 3.0), phi);
  auto w = random_zero_boundary(g, 0.5, 11);
  GridFunction grad = gateaux_gradient(EnergyKind::F_FULL, data, w);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (g.is_boundary_node(i)) CHECK(grad[i] == 0.0);
  }
}

TEST_CASE("1d laplacian stencil at p = 2") {
  // For the gradient-only energy at p = 2 the exact derivative with respect
  // to w_n is (2 d_n - d_{n-1} - d_{n+1})/h with d = w - phi; an affine phi
  // drops out.
  Grid g = unit_interval(9);
  double h = g.spacing(0);
  auto phi = GridFunction::sample(g, [](double x, double) { return 2.0 * x; });
  ProblemData data(const_exponent(g, 2.0), phi);
  auto w = random_zero_boundary(g, 1.0, 515);
  GridFunction grad = gateaux_gradient(EnergyKind::F_GRAD, data, w);
  for (std::size_t n = 1; n + 1 < g.node_count(); ++n) {
    double expected = (2.0 * w[n] - w[n - 1] - w[n + 1]) / h;
    CHECK(grad[n] == doctest::Approx(expected).epsilon(1e-13));
  }
}

TEST_CASE("2d harmonic datum has exactly zero initial gradient at p = 2") {
  // phi = x^2 - y^2 is discrete-harmonic for the cell-centered stencil on a
  // dyadic square grid; the gradient at w = 0 must vanish bitwise. The 2d
  // solver accuracy checks lean on this exactness.
  Grid g = square_grid(17, 17);
  auto phi = GridFunction::sample(
      g, [](double x, double y) { return x * x - y * y; });
  ProblemData data(const_exponent(g, 2.0), phi);
  GridFunction grad =
      gateaux_gradient(EnergyKind::F_GRAD, data, GridFunction::zeros(g));
  for (std::size_t i = 0; i < g.node_count(); ++i) CHECK(grad[i] == 0.0);
}

TEST_CASE("plain gradient energy doubles the weighted one at p = 2") {
  Grid g = unit_interval(9);
  auto phi = GridFunction::sample(g, [](double x, double) { return x * x; });
  ProblemData data(const_exponent(g, 2.0), phi);
  auto w = random_zero_boundary(g, 0.4, 629);
  GridFunction gf = gateaux_gradient(EnergyKind::F_GRAD, data, w);
  GridFunction gg = gateaux_gradient(EnergyKind::G_UNWEIGHTED, data, w);
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    CHECK(gg[i] == 2.0 * gf[i]);
  }
  CHECK(energy(EnergyKind::G_UNWEIGHTED, data, w).value() ==
        2.0 * energy(EnergyKind::F_GRAD, data, w).value());
}

TEST_CASE("directional derivative is the gradient pairing") {
  Grid g = unit_interval(9);
  auto phi = GridFunction::sample(g, [](double x, double) { return x; });
  ProblemData data(const_exponent(g, 2.5), phi);
  auto w = random_zero_boundary(g, 0.3, 1001);
  auto h1 = random_zero_boundary(g, 1.0, 1002);
  auto h2 = random_zero_boundary(g, 1.0, 1003);

  GridFunction grad = gateaux_gradient(EnergyKind::F_FULL, data, w);
  double dot = 0.0;
  for (std::size_t i = 0; i < g.node_count(); ++i) dot += grad[i] * h1[i];
  double dd = directional_derivative(EnergyKind::F_FULL, data, w, h1);
  CHECK(dd == doctest::Approx(dot).epsilon(1e-13));

  // Linearity in the direction.
  double lhs = directional_derivative(EnergyKind::F_FULL, data, w,
                                      2.0 * h1 - h2);
  double rhs = 2.0 * directional_derivative(EnergyKind::F_FULL, data, w, h1) -
               directional_derivative(EnergyKind::F_FULL, data, w, h2);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("saturation during evaluation") {
  Grid g = unit_interval(5);
  auto phi = GridFunction::sample(g, [](double x, double) { return x; });
  ProblemData data(const_exponent(g, 80.0), phi);

  // Energy saturates to +infinity, never overflows silently.
  std::vector<double> vals(g.node_count(), 0.0);
  vals[2] = 1e5;
  GridFunction spike(g, vals);
  CHECK(!energy(EnergyKind::F_FULL, data, spike).is_finite());

  // Gradients are only defined at finite energies.
  CHECK_THROWS_AS(gateaux_gradient(EnergyKind::F_FULL, data, spike),
                  SaturationError);
}
