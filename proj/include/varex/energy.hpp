#pragma once

// Discretized Dirichlet-type energies for boundary-value data phi and their
// exact Gateaux gradients with respect to interior node values.
//
// The minimization variable is w = phi - v with zero boundary values; the
// candidate solution is recovered as v = phi - w. Every energy integrates a
// per-cell integrand of d = w - phi over midpoint cells:
//
//   F_FULL       : (|d|^p + |grad d|^p) / p
//   F_GRAD       : |grad d|^p / p
//   J_WEIGHTED   : (q |d|^p + |grad d|^p) / p   (needs cell weights q >= 0)
//   G_UNWEIGHTED : |grad d|^p
//
// with p (and q) sampled at cell midpoints. Saturating terms make the energy
// +infinity; gradients are only defined where the energy is finite.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <varex/exponent.hpp>
#include <varex/extended_real.hpp>
#include <varex/grid.hpp>

namespace varex {

enum class EnergyKind { F_FULL, F_GRAD, J_WEIGHTED, G_UNWEIGHTED };

/// Raised when data or an iterate pushes an integrand past the finite double
/// range, so no meaningful finite value can be reported.
struct SaturationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Problem data for a Dirichlet minimization: the grid, the exponent field,
/// the boundary-datum function phi sampled on all nodes, and (optionally)
/// per-cell weights q for the weighted energy.
class ProblemData {
 public:
  /// Validates that everything lives on one grid, that q (when given) has
  /// one finite nonnegative weight per cell, and that phi itself has finite
  /// full modular; a saturating phi throws SaturationError since no energy
  /// value would be finite.
  ProblemData(ExponentField p, GridFunction phi,
              std::optional<std::vector<double>> q = std::nullopt);

  const Grid& grid() const { return phi_.grid(); }
  const ExponentField& p() const { return p_; }
  const GridFunction& phi() const { return phi_; }
  const std::optional<std::vector<double>>& q() const { return q_; }

 private:
  ExponentField p_;
  GridFunction phi_;
  std::optional<std::vector<double>> q_;
};

/// Energy at w. Requires w on the data grid with exactly zero boundary
/// values. J_WEIGHTED requires data.q().
ExtendedReal energy(EnergyKind kind, const ProblemData& data,
                    const GridFunction& w);

/// Exact gradient of the energy with respect to the node values of w,
/// assembled from the per-cell chain rule. Boundary entries are zero.
/// Requires the energy at w to be finite (throws SaturationError otherwise).
GridFunction gateaux_gradient(EnergyKind kind, const ProblemData& data,
                              const GridFunction& w);

/// <grad E(w), h> for a perturbation h vanishing on the boundary.
double directional_derivative(EnergyKind kind, const ProblemData& data,
                              const GridFunction& w, const GridFunction& h);

namespace detail {

/// Unchecked span-based energy used by the solver inner loop.
ExtendedReal energy_raw(EnergyKind kind, const ProblemData& data,
                        std::span<const double> w);

/// Fused energy + gradient; writes one entry per node into grad_out
/// (boundary entries zero). When the energy saturates the gradient content
/// is unspecified and the return value is +infinity.
ExtendedReal energy_and_gradient_raw(EnergyKind kind, const ProblemData& data,
                                     std::span<const double> w,
                                     std::span<double> grad_out);

}  // namespace detail

}  // namespace varex
