#pragma once

// Modular functionals for variable exponents, the induced Luxemburg norm,
// and the doubling (delta-two) ratio.
//
// All modulars integrate over grid cells with the midpoint rule; the cell
// value of u is the corner average and the cell gradient is the compact
// difference stencil from grid.hpp. Whenever a single cell term exceeds the
// finite double range the whole modular is reported as +infinity rather than
// silently overflowing.

#include <varex/exponent.hpp>
#include <varex/extended_real.hpp>
#include <varex/grid.hpp>

namespace varex {

/// Which integrand the modular accumulates per cell (value v, gradient g,
/// exponent p, all sampled on the cell):
///   RHO_P     : |v|^p / p
///   ETA_P     : |v|^p
///   RHO_GRAD  : |g|^p / p
///   RHO_1P    : (|v|^p + |g|^p) / p
///   ETA_GRAD  : |g|^p
enum class ModularKind { RHO_P, ETA_P, RHO_GRAD, RHO_1P, ETA_GRAD };

/// Evaluates the modular of u against the exponent field p.
/// Requires u and p to live on the same grid. The result is +infinity when
/// any contributing cell term saturates the double range.
ExtendedReal modular_eval(ModularKind kind, const GridFunction& u,
                          const ExponentField& p);

/// Modular of the difference u - v (same grid required for all three).
ExtendedReal modular_distance(ModularKind kind, const GridFunction& u,
                              const GridFunction& v, const ExponentField& p);

/// Luxemburg norm: the infimum of lambda > 0 with modular(u / lambda) <= 1,
/// located by bracketing from lambda = 1 and bisecting to the relative width
/// `tol`. Returns the upper end of the final bracket, so the reported value
/// always satisfies the defining inequality. Returns 0 when the modular of u
/// vanishes. A saturated (+infinity) probe is treated as "modular > 1".
double luxemburg_norm(ModularKind kind, const GridFunction& u,
                      const ExponentField& p, double tol = 1e-13);

/// Doubling ratio modular(2u) / modular(u). Throws std::invalid_argument when
/// modular(u) is zero or already saturated, since the ratio is then
/// meaningless. A saturated numerator yields +infinity.
ExtendedReal delta2_ratio(ModularKind kind, const GridFunction& u,
                          const ExponentField& p);

}  // namespace varex
