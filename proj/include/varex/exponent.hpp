#pragma once

#include <functional>
#include <span>
#include <vector>

#include "varex/extended_real.hpp"
#include "varex/grid.hpp"

namespace varex {

/// Variable exponent sampled at cell midpoints. Samples must be finite and
/// > 1; p_minus/p_max are the exact extrema of the samples. Unbounded
/// exponents like 1/x are represented faithfully by whatever the midpoints
/// see, so refining the grid raises p_max.
class ExponentField {
 public:
  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t cell) const { return values_[cell]; }
  double p_minus() const { return p_minus_; }
  double p_max() const { return p_max_; }

  friend ExponentField make_exponent(const Grid& g,
                                     const std::function<double(double, double)>& p);

 private:
  Grid grid_;
  std::vector<double> values_;
  double p_minus_ = 0.0;
  double p_max_ = 0.0;
};

/// Samples p at every cell midpoint. Throws std::invalid_argument naming the
/// cell when a sample is non-finite or <= 1.
ExponentField make_exponent(const Grid& g, const std::function<double(double, double)>& p);

/// Gate for the Dirichlet theory: p_minus > dim. Advisory only outside the
/// solve path; the solver proceeds but reports it.
bool admissible_for_dirichlet(const ExponentField& p, int dim);

/// Midpoint quadrature of exp(q)/q over the domain; +inf once any sample
/// overflows the finite range. Monotone under dyadic refinement for convex
/// integrands, which is how the failure of the condition shows up for 1/x.
ExtendedReal exp_integrability_check(const ExponentField& q);

}  // namespace varex
