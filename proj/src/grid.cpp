#include "varex/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace varex {

Domain Domain::interval(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
    throw std::invalid_argument("Domain::interval: need finite a < b");
  Domain d;
  d.dim = 1;
  d.lo = {a, 0.0};
  d.hi = {b, 0.0};
  return d;
}

Domain Domain::rectangle(double ax, double bx, double ay, double by) {
  if (!std::isfinite(ax) || !std::isfinite(bx) || !(ax < bx) || !std::isfinite(ay) ||
      !std::isfinite(by) || !(ay < by))
    throw std::invalid_argument("Domain::rectangle: need finite ax < bx and ay < by");
  Domain d;
  d.dim = 2;
  d.lo = {ax, ay};
  d.hi = {bx, by};
  return d;
}

double Domain::measure() const {
  double m = hi[0] - lo[0];
  if (dim == 2) m *= hi[1] - lo[1];
  return m;
}

Grid build_grid(const Domain& d, std::array<int, 2> n_nodes) {
  if (d.dim != 1 && d.dim != 2) throw std::invalid_argument("build_grid: dim must be 1 or 2");
  for (int ax = 0; ax < d.dim; ++ax) {
    if (n_nodes[static_cast<std::size_t>(ax)] < 3)
      throw std::invalid_argument("build_grid: need at least 3 nodes per axis, axis " +
                                  std::to_string(ax) + " has " +
                                  std::to_string(n_nodes[static_cast<std::size_t>(ax)]));
  }
  Grid g;
  g.domain_ = d;
  g.nodes_ = {n_nodes[0], d.dim == 2 ? n_nodes[1] : 1};
  g.h_[0] = (d.hi[0] - d.lo[0]) / (n_nodes[0] - 1);
  g.h_[1] = d.dim == 2 ? (d.hi[1] - d.lo[1]) / (n_nodes[1] - 1) : 0.0;
  return g;
}

std::size_t Grid::node_count() const {
  return static_cast<std::size_t>(nodes_[0]) * static_cast<std::size_t>(nodes_[1]);
}

std::size_t Grid::cell_count() const {
  std::size_t c = static_cast<std::size_t>(nodes_[0] - 1);
  if (dim() == 2) c *= static_cast<std::size_t>(nodes_[1] - 1);
  return c;
}

double Grid::cell_measure() const { return dim() == 1 ? h_[0] : h_[0] * h_[1]; }

std::size_t Grid::node_index(int i, int j) const {
  return static_cast<std::size_t>(i) + static_cast<std::size_t>(nodes_[0]) * static_cast<std::size_t>(j);
}

std::size_t Grid::cell_index(int i, int j) const {
  return static_cast<std::size_t>(i) +
         static_cast<std::size_t>(nodes_[0] - 1) * static_cast<std::size_t>(j);
}

std::array<double, 2> Grid::node_coord(std::size_t node) const {
  int i = static_cast<int>(node % static_cast<std::size_t>(nodes_[0]));
  int j = static_cast<int>(node / static_cast<std::size_t>(nodes_[0]));
  return {domain_.lo[0] + i * h_[0], dim() == 2 ? domain_.lo[1] + j * h_[1] : 0.0};
}

std::array<double, 2> Grid::cell_midpoint(std::size_t cell) const {
  int cx = nodes_[0] - 1;
  int i = static_cast<int>(cell % static_cast<std::size_t>(cx));
  int j = static_cast<int>(cell / static_cast<std::size_t>(cx));
  return {domain_.lo[0] + (i + 0.5) * h_[0], dim() == 2 ? domain_.lo[1] + (j + 0.5) * h_[1] : 0.0};
}

int Grid::cell_corners(std::size_t cell, std::size_t out[4]) const {
  int cx = nodes_[0] - 1;
  int i = static_cast<int>(cell % static_cast<std::size_t>(cx));
  int j = static_cast<int>(cell / static_cast<std::size_t>(cx));
  if (dim() == 1) {
    out[0] = node_index(i);
    out[1] = node_index(i + 1);
    return 2;
  }
  out[0] = node_index(i, j);
  out[1] = node_index(i + 1, j);
  out[2] = node_index(i, j + 1);
  out[3] = node_index(i + 1, j + 1);
  return 4;
}

bool Grid::is_boundary_node(std::size_t node) const {
  int i = static_cast<int>(node % static_cast<std::size_t>(nodes_[0]));
  int j = static_cast<int>(node / static_cast<std::size_t>(nodes_[0]));
  if (i == 0 || i == nodes_[0] - 1) return true;
  if (dim() == 2 && (j == 0 || j == nodes_[1] - 1)) return true;
  return false;
}

std::vector<std::size_t> Grid::interior_nodes() const {
  std::vector<std::size_t> out;
  out.reserve(node_count());
  for (std::size_t n = 0; n < node_count(); ++n)
    if (!is_boundary_node(n)) out.push_back(n);
  return out;
}

bool operator==(const Grid& a, const Grid& b) {
  return a.domain_.dim == b.domain_.dim && a.domain_.lo == b.domain_.lo &&
         a.domain_.hi == b.domain_.hi && a.nodes_ == b.nodes_;
}

GridFunction::GridFunction(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.node_count())
    throw std::invalid_argument("GridFunction: value count " + std::to_string(values_.size()) +
                                " does not match node count " +
                                std::to_string(grid_.node_count()));
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("GridFunction: non-finite value");
}

GridFunction GridFunction::zeros(const Grid& g) {
  return GridFunction(g, std::vector<double>(g.node_count(), 0.0));
}

GridFunction GridFunction::sample(const Grid& g, const std::function<double(double, double)>& f) {
  std::vector<double> v(g.node_count());
  for (std::size_t n = 0; n < g.node_count(); ++n) {
    auto xy = g.node_coord(n);
    v[n] = f(xy[0], xy[1]);
  }
  return GridFunction(g, std::move(v));
}

static void require_same_grid(const GridFunction& a, const GridFunction& b) {
  if (a.grid() != b.grid())
    throw std::invalid_argument("GridFunction arithmetic: grid mismatch");
}

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b);
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] + b[i];
  return GridFunction(a.grid(), std::move(v));
}

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
  require_same_grid(a, b);
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] - b[i];
  return GridFunction(a.grid(), std::move(v));
}

GridFunction operator*(double s, const GridFunction& a) {
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = s * a[i];
  return GridFunction(a.grid(), std::move(v));
}

double GradientField::norm(std::size_t cell) const {
  const auto& g = vectors[cell];
  return std::sqrt(g[0] * g[0] + g[1] * g[1]);
}

GradientField gradient(const GridFunction& u) {
  const Grid& g = u.grid();
  GradientField out{g, std::vector<std::array<double, 2>>(g.cell_count())};
  if (g.dim() == 1) {
    double inv_h = 1.0 / g.spacing(0);
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
      std::size_t corners[4];
      g.cell_corners(c, corners);
      out.vectors[c] = {(u[corners[1]] - u[corners[0]]) * inv_h, 0.0};
    }
    return out;
  }
  double cx = 1.0 / (2.0 * g.spacing(0));
  double cy = 1.0 / (2.0 * g.spacing(1));
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    std::size_t n[4];
    g.cell_corners(c, n);
    double gx = ((u[n[1]] - u[n[0]]) + (u[n[3]] - u[n[2]])) * cx;
    double gy = ((u[n[2]] - u[n[0]]) + (u[n[3]] - u[n[1]])) * cy;
    out.vectors[c] = {gx, gy};
  }
  return out;
}

double cell_average(const GridFunction& u, std::size_t cell) {
  std::size_t n[4];
  int k = u.grid().cell_corners(cell, n);
  if (k == 2) return 0.5 * (u[n[0]] + u[n[1]]);
  return 0.25 * (u[n[0]] + u[n[1]] + u[n[2]] + u[n[3]]);
}

double integrate(const Grid& g, std::span<const double> cell_values) {
  if (cell_values.size() != g.cell_count())
    throw std::invalid_argument("integrate: need one value per cell");
  for (double v : cell_values)
    if (!std::isfinite(v)) throw std::invalid_argument("integrate: non-finite cell value");
  double m = g.cell_measure();
  double sum = 0.0, comp = 0.0;  // Kahan
  for (double v : cell_values) {
    double term = v * m - comp;
    double next = sum + term;
    comp = (next - sum) - term;
    sum = next;
  }
  return sum;
}

}  // namespace varex
