#pragma once

// Shared helpers for the unit tests: tiny grid factories, constant fields,
// and a seeded random grid function with zero boundary values.

#include <array>
#include <cmath>
#include <vector>

#include <varex/exponent.hpp>
#include <varex/grid.hpp>
#include <varex/random.hpp>

namespace testsupport {

inline varex::Grid interval_grid(double a, double b, int n) {
  return varex::build_grid(varex::Domain::interval(a, b), {n, 1});
}

inline varex::Grid unit_interval(int n) { return interval_grid(0.0, 1.0, n); }

inline varex::Grid square_grid(int nx, int ny) {
  return varex::build_grid(varex::Domain::rectangle(0.0, 1.0, 0.0, 1.0),
                           {nx, ny});
}

inline varex::ExponentField const_exponent(const varex::Grid& g, double p) {
  return varex::make_exponent(g, [p](double, double) { return p; });
}

inline varex::GridFunction const_function(const varex::Grid& g, double c) {
  return varex::GridFunction::sample(g, [c](double, double) { return c; });
}

/// Uniform values in [-amp, amp] on interior nodes, zero on the boundary.
inline varex::GridFunction random_zero_boundary(const varex::Grid& g,
                                                double amp,
                                                std::uint64_t seed) {
  varex::Rng rng(seed);
  std::vector<double> vals(g.node_count(), 0.0);
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (!g.is_boundary_node(i)) vals[i] = rng.uniform(-amp, amp);
  }
  return varex::GridFunction(g, std::move(vals));
}

/// Largest |u_i - v_i| over all nodes.
inline double sup_diff(const varex::GridFunction& u,
                       const varex::GridFunction& v) {
  double m = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    m = std::max(m, std::abs(u[i] - v[i]));
  return m;
}

}  // namespace testsupport
