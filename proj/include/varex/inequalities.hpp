#pragma once

// Sharpened convexity inequalities for p-th powers of Euclidean norms, the
// uniform-convexity-style probe for variable-exponent modulars, and the
// strong monotonicity gap of the p-power vector field.

#include <cstdint>
#include <span>

#include <varex/exponent.hpp>
#include <varex/modular.hpp>

namespace varex {

/// Two sides of an inequality, reported so callers can check lhs <= rhs with
/// their own slack.
struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// For 1 <= p <= 2 and u, v not both zero:
///   |m|^p + p(p-1)/2^(p+1) * |u-v|^2 / (|u|+|v|)^(2-p)  <=  (|u|^p+|v|^p)/2
/// where m = (u+v)/2 and |.| is the Euclidean norm.
InequalityCheck clarkson_low(std::span<const double> u,
                             std::span<const double> v, double p);

/// For p >= 2:
///   |(u+v)/2|^p + |(u-v)/2|^p  <=  (|u|^p + |v|^p)/2.
InequalityCheck clarkson_high(std::span<const double> u,
                              std::span<const double> v, double p);

/// Elementary facts about f(t) = log(t)/(t-1) on t > 1: f < 1, f is strictly
/// decreasing along the (strictly increasing) sample sequence, t^(1/(t-1))
/// stays below e, and f approaches 1 at the left end. Returns true iff every
/// sample satisfies all of them. Throws std::invalid_argument unless the
/// samples are strictly increasing and all exceed 1.
bool lemma_stupid_check(std::span<const double> t_samples);

/// Outcome of the empirical uniform-convexity probe.
struct UcStarEstimate {
  double epsilon = 0.0;
  double delta_formula = 0.0;    ///< min(eps/2, (p_minus - 1) eps^2 / 32)
  double delta_empirical = 0.0;  ///< 1 - max midpoint-to-average ratio seen
  long n_samples = 0;            ///< pairs drawn
  long n_admissible = 0;         ///< pairs with rho((u-v)/2) >= eps * avg
};

/// Draws n_samples random pairs (u, v) on the exponent's grid, keeps the
/// pairs that are epsilon-separated relative to avg = (rho(u)+rho(v))/2, and
/// reports how far the midpoint modular stays below avg in the worst case.
/// kind must be RHO_P, RHO_GRAD or RHO_1P. Requires 0 < epsilon < 1 and
/// n_samples > 0. Deterministic in seed. Zero admissible pairs is reported
/// (delta_empirical = 1, n_admissible = 0), not an error; the caller decides
/// whether to widen the sampling.
UcStarEstimate uc_star_probe(ModularKind kind, const ExponentField& p,
                             double epsilon, long n_samples,
                             std::uint64_t seed);

/// Strong monotonicity of a |a|^(p-2) a for p >= 2:
///   <|A|^(p-2) A - |B|^(p-2) B, A - B>  >=  2^(2-p) |A - B|^p.
/// Reports lhs normalized by |A-B|^p together with the constant 2^(2-p).
/// Throws std::invalid_argument when A == B (the gap is then 0/0).
struct MonotonicityGap {
  double normalized_pairing = 0.0;  ///< lhs / |A-B|^p
  double gamma_bound = 0.0;         ///< 2^(2-p)
};
MonotonicityGap monotonicity_gap(std::span<const double> a,
                                 std::span<const double> b, double p);

}  // namespace varex
