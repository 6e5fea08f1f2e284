#pragma once

// Reproducible analytic examples around unbounded exponents on (0,1):
// a sequence showing the weighted and unweighted modulars decay at different
// rates under p(x) = 1/x, a layered construction whose unweighted tail
// modular telescopes exactly, and a transfer demonstration from the variable
// exponent to a bounded one.
//
// Every quantity is computed by midpoint quadrature on the stated support at
// a caller-chosen resolution, then compared against closed-form bounds.

#include <string>
#include <utility>
#include <vector>

namespace varex {

/// Outcome of one example run; `computed` and `bounds` keep insertion order
/// so serialized reports are byte-stable.
struct ExampleReport {
  std::string example;
  long index = 0;
  std::vector<std::pair<std::string, double>> computed;
  std::vector<std::pair<std::string, double>> bounds;
  bool pass = false;
};

/// Quadrature values for the j-th member of the spike sequence
/// u_j = j^(2/j) on (1/(j+1), 1/j) with exponent p(x) = 1/x.
struct RemarkValues {
  double rho_p = 0.0;  ///< weighted modular: integral of x |u|^(1/x)
  double eta_p = 0.0;  ///< unweighted modular: integral of |u|^(1/x)
};

/// Computes both modulars of u_j with `resolution` midpoint cells on the
/// support. Requires j >= 2 and resolution >= 1.
RemarkValues remark_values(long j, int resolution);

/// Closed form of the bounded-exponent modular (q identically 2) of u_j:
/// j^(4/j) / (2 j (j+1)).
double remark_rho_q(long j);

/// Full report for one sequence member: checks rho_p <= eta_p / j and
/// eta_p >= 2/3. Requires j >= 2 and resolution >= 8 (at least 8 cells on
/// the support; smaller values raise std::invalid_argument naming the
/// required resolution).
ExampleReport remark_sequence(long j, int resolution);

/// Quadrature values for the layered construction w_s = B_s^x on
/// I_s = (1/(s+1), 1/s), B_s = s (s+1) 2^(-s), with exponent p(x) = 1/x.
struct ConstructionValues {
  double eta_tail = 0.0;       ///< unweighted modular of the tail sum over s in (k, s_max]
  double rho_tail = 0.0;       ///< weighted modular of the same tail
  double tail_sum = 0.0;       ///< exact telescoped value: 2^(-k) - 2^(-s_max)
  double integral_u = 0.0;     ///< integral of the full layered function
  double integral_bound = 0.0; ///< sum of (1/s^2)^(1 - 1/s)
  double witness = 0.0;        ///< weighted modular of twice the tail
  double witness_bound = 0.0;  ///< sum of 1/(s+1) over the tail layers
};

/// Computes the construction quantities with `resolution` midpoint cells per
/// layer. Requires 1 <= k < s_max <= 64 and resolution >= 1.
ConstructionValues construction_values(int k, int s_max, int resolution);

/// Full report: the unweighted tail modular matches the telescoped sum to
/// 1e-10, the weighted tail stays below it, the integral of the function is
/// dominated by its layer bound, and doubling the function makes the
/// weighted modular exceed the divergent harmonic tail. Requires
/// 1 <= k < s_max <= 64 and resolution >= 8 (same hint convention as above).
ExampleReport example_construction(int k, int s_max, int resolution);

/// Transfer demonstration: sweeps the spike sequence for j = 2..200 and
/// checks that whenever the variable-exponent modular is below 1e-3 the
/// bounded-exponent modular (q identically 2) is below 1e-2, that the
/// bounded-exponent modular decreases along the sweep, and that q passes the
/// exponential integrability test on (0, 1/2). Requires resolution >= 8.
ExampleReport pimpliesq_demo(int resolution);

}  // namespace varex
