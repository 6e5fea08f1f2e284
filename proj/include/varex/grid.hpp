#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace varex {

/// Axis-aligned interval (dim 1) or rectangle (dim 2).
struct Domain {
  int dim = 1;
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{1.0, 0.0};

  static Domain interval(double a, double b);
  static Domain rectangle(double ax, double bx, double ay, double by);

  double measure() const;
};

/// Uniform node lattice over a Domain. Cheap value type: everything is
/// derived from the node counts and bounds, nothing is cached.
///
/// Nodes are indexed i + nx*j (x fastest), cells i + (nx-1)*j. A cell's
/// corner order is fixed as {ll, lr, ul, ur}; stencil code relies on it.
class Grid {
 public:
  Grid() = default;

  int dim() const { return domain_.dim; }
  const Domain& domain() const { return domain_; }
  int nodes(int axis) const { return nodes_[static_cast<std::size_t>(axis)]; }
  double spacing(int axis) const { return h_[static_cast<std::size_t>(axis)]; }
  int cells(int axis) const { return nodes_[static_cast<std::size_t>(axis)] - 1; }

  std::size_t node_count() const;
  std::size_t cell_count() const;
  double cell_measure() const;

  std::size_t node_index(int i, int j = 0) const;
  std::size_t cell_index(int i, int j = 0) const;

  std::array<double, 2> node_coord(std::size_t node) const;
  std::array<double, 2> cell_midpoint(std::size_t cell) const;

  /// Corner node indices of a cell; writes 2 entries in 1D, 4 in 2D.
  /// 2D order: lower-left, lower-right, upper-left, upper-right.
  int cell_corners(std::size_t cell, std::size_t out[4]) const;

  bool is_boundary_node(std::size_t node) const;
  std::vector<std::size_t> interior_nodes() const;

  friend bool operator==(const Grid& a, const Grid& b);
  friend bool operator!=(const Grid& a, const Grid& b) { return !(a == b); }

  friend Grid build_grid(const Domain& d, std::array<int, 2> n_nodes);

 private:
  Domain domain_;
  std::array<int, 2> nodes_{2, 1};
  std::array<double, 2> h_{1.0, 0.0};
};

/// Builds the lattice; requires >= 3 nodes per active axis.
Grid build_grid(const Domain& d, std::array<int, 2> n_nodes);

/// Nodal scalar field on a Grid. Values are validated finite on construction;
/// instances are immutable and safe to share.
class GridFunction {
 public:
  GridFunction(Grid grid, std::vector<double> values);

  static GridFunction zeros(const Grid& g);
  static GridFunction sample(const Grid& g, const std::function<double(double, double)>& f);

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

 private:
  Grid grid_;
  std::vector<double> values_;
};

GridFunction operator+(const GridFunction& a, const GridFunction& b);
GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction operator*(double s, const GridFunction& a);

/// Per-cell gradient vectors (component [1] is zero in 1D).
struct GradientField {
  Grid grid;
  std::vector<std::array<double, 2>> vectors;

  double norm(std::size_t cell) const;
};

/// Cell-centered gradient: forward difference in 1D, average of opposing
/// edge differences per axis in 2D (exact for the bilinear interpolant at
/// the cell midpoint).
GradientField gradient(const GridFunction& u);

/// Mean of the cell's corner values (the "value at the midpoint" used by
/// modulars and energies).
double cell_average(const GridFunction& u, std::size_t cell);

/// Midpoint quadrature: sum of f_cell * cell_measure, compensated summation
/// in fixed cell order so results are reproducible run to run.
double integrate(const Grid& g, std::span<const double> cell_values);

}  // namespace varex
