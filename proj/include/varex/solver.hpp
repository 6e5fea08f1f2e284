#pragma once

// Projected gradient descent for Dirichlet energies over interior node
// values, with an Armijo backtracking line search, plus the independent
// checks used to corroborate a computed minimizer: a flux-balance oracle in
// one dimension, a two-start uniqueness probe, and a random-perturbation
// variational certificate.

#include <cstdint>
#include <optional>
#include <vector>

#include <varex/energy.hpp>
#include <varex/grid.hpp>

namespace varex {

struct SolverConfig {
  double grad_tol = 1e-8;    ///< stop when the sup norm of the gradient drops below
  long max_iters = 200000;   ///< hard cap on accepted descent steps
  double armijo_c = 1e-4;    ///< sufficient-decrease fraction
  double backtrack = 0.5;    ///< step shrink factor in the line search

  enum class Init { zeros, random, provided };
  Init init = Init::zeros;
  std::uint64_t seed = 0;    ///< for Init::random (interior uniform in [-0.5, 0.5])
  std::optional<GridFunction> initial;  ///< for Init::provided (zero boundary)

  /// Trial-step choice: "adaptive" seeds each line search with a
  /// Barzilai-Borwein estimate of the local curvature (capped, falling back
  /// to growing the previous step), "classic" just grows the previous
  /// accepted step. Both descend along the negative gradient and enforce the
  /// same Armijo decrease, so they find the same minimizers; adaptive needs
  /// far fewer iterations on stiff exponents.
  enum class StepRule { adaptive, classic };
  StepRule step_rule = StepRule::adaptive;
};

struct SolverReport {
  GridFunction solution;   ///< v = phi - w*, boundary values equal to phi's
  double final_energy = 0.0;
  long iterations = 0;     ///< accepted descent steps
  std::vector<double> energy_trace;     ///< energy at every iterate, from the start
  std::vector<double> grad_norm_trace;  ///< sup norm of the gradient alongside

  enum class Termination { converged, max_iters, saturated_energy };
  Termination termination = Termination::converged;
};

/// Minimizes the chosen energy over functions w with zero boundary values
/// and returns v = phi - w*. The energy trace is non-increasing up to
/// floating-point resolution: while decreases are representable each step
/// strictly lowers the energy, and in the terminal phase, where a step's
/// true decrease falls below one ulp of the energy, a recorded value may
/// exceed its predecessor by a few ulps while the gradient sup norm (the
/// progress measure there) strictly contracts. Termination is `converged`
/// exactly when the gradient sup norm reached grad_tol, `saturated_energy`
/// when the initial iterate already has infinite energy, and `max_iters`
/// otherwise.
SolverReport solve_dirichlet(EnergyKind kind, const ProblemData& data,
                             const SolverConfig& config);

/// One-dimensional two-point boundary oracle: finds the constant flux c with
///   sum_cells h * sign(c) |c|^(1/(p_c - 1)) = b_val - a_val
/// by bisection and integrates the resulting slopes into nodal values with
/// v(first node) = a_val. Independent of the energy machinery; the descent
/// solver must reproduce it. Requires a one-dimensional exponent grid.
GridFunction oracle_1d_flux(const ExponentField& p, double a_val,
                            double b_val);

/// Two independently configured runs on the same problem, reported with the
/// sup distance between their solutions.
struct UniquenessProbe {
  double sup_diff = 0.0;
  SolverReport run_a;
  SolverReport run_b;
};

/// Runs the solver from two configurations (typically different inits) and
/// measures how far apart the minimizers land. Throws std::runtime_error if
/// either run fails to converge.
UniquenessProbe uniqueness_probe(EnergyKind kind, const ProblemData& data,
                                 const SolverConfig& config_a,
                                 const SolverConfig& config_b);

/// Minimum of <grad E(w*), delta> over random interior perturbations with
/// unit l1 norm, where w* = phi - v_star. A genuine minimizer keeps this
/// within gradient tolerance of zero from below.
struct VariationalCertificate {
  double min_pairing = 0.0;
  int n_directions = 0;
};

VariationalCertificate variational_certificate(EnergyKind kind,
                                               const ProblemData& data,
                                               const GridFunction& v_star,
                                               int n_directions,
                                               std::uint64_t seed);

}  // namespace varex
