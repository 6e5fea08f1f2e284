#include <varex/counterexamples.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <varex/exponent.hpp>
#include <varex/grid.hpp>

#include "cell_kernels.hpp"

namespace varex {

namespace {

void require_resolution(int resolution, const char* who) {
  if (resolution < 8) {
    throw std::invalid_argument(
        std::string(who) +
        ": resolution must cover the support with at least 8 cells; pass "
        "resolution >= 8");
  }
}

}  // namespace

RemarkValues remark_values(long j, int resolution) {
  if (j < 2) throw std::invalid_argument("remark_values: requires j >= 2");
  if (resolution < 1) {
    throw std::invalid_argument("remark_values: resolution must be positive");
  }
  const double lo = 1.0 / static_cast<double>(j + 1);
  const double hi = 1.0 / static_cast<double>(j);
  const double h = (hi - lo) / resolution;
  // u_j = j^(2/j) is constant; its log keeps the power exp-stable.
  const double log_u = 2.0 * std::log(static_cast<double>(j)) /
                       static_cast<double>(j);

  detail::KahanSum rho;
  detail::KahanSum eta;
  for (int i = 0; i < resolution; ++i) {
    const double x = lo + (i + 0.5) * h;
    const double integrand = std::exp(log_u / x);  // |u|^(1/x)
    eta.add(integrand * h);
    rho.add(x * integrand * h);
  }
  return RemarkValues{rho.sum, eta.sum};
}

double remark_rho_q(long j) {
  if (j < 2) throw std::invalid_argument("remark_rho_q: requires j >= 2");
  const double dj = static_cast<double>(j);
  return std::pow(dj, 4.0 / dj) / (2.0 * dj * (dj + 1.0));
}

ExampleReport remark_sequence(long j, int resolution) {
  if (j < 2) throw std::invalid_argument("remark_sequence: requires j >= 2");
  require_resolution(resolution, "remark_sequence");
  const RemarkValues v = remark_values(j, resolution);

  ExampleReport report;
  report.example = "remark";
  report.index = j;
  report.computed = {
      {"rho_p", v.rho_p},
      {"eta_p", v.eta_p},
      {"ratio_rho_over_eta", v.rho_p / v.eta_p},
  };
  const double rho_le = v.eta_p / static_cast<double>(j);
  report.bounds = {
      {"rho_p_le", rho_le},
      {"eta_p_ge", 2.0 / 3.0},
  };
  report.pass = v.rho_p <= rho_le * (1.0 + 1e-12) && v.eta_p >= 2.0 / 3.0;
  return report;
}

ConstructionValues construction_values(int k, int s_max, int resolution) {
  if (k < 1 || k >= s_max || s_max > 64) {
    throw std::invalid_argument(
        "construction_values: requires 1 <= k < s_max <= 64");
  }
  if (resolution < 1) {
    throw std::invalid_argument(
        "construction_values: resolution must be positive");
  }

  ConstructionValues out;
  detail::KahanSum eta_tail;
  detail::KahanSum rho_tail;
  detail::KahanSum integral_u;
  detail::KahanSum witness;
  detail::KahanSum integral_bound;
  detail::KahanSum witness_bound;

  for (int s = 1; s <= s_max; ++s) {
    const double ds = s;
    const double lo = 1.0 / (ds + 1.0);
    const double hi = 1.0 / ds;
    const double h = (hi - lo) / resolution;
    // Layer height base: w_s(x) = B^x with B = |I_s|^{-1} 2^{-s}.
    const double base = ds * (ds + 1.0) * std::pow(2.0, -ds);
    const bool in_tail = s > k;

    for (int i = 0; i < resolution; ++i) {
      const double x = lo + (i + 0.5) * h;
      const double u = std::pow(base, x);
      integral_u.add(u * h);
      if (in_tail) {
        const double u_pow_p = std::pow(u, 1.0 / x);  // recovers B up to rounding
        eta_tail.add(u_pow_p * h);
        rho_tail.add(x * u_pow_p * h);
        witness.add(x * std::pow(2.0, 1.0 / x) * u_pow_p * h);
      }
    }

    integral_bound.add(std::pow(1.0 / (ds * ds), 1.0 - 1.0 / ds));
    if (in_tail) witness_bound.add(1.0 / (ds + 1.0));
  }

  out.eta_tail = eta_tail.sum;
  out.rho_tail = rho_tail.sum;
  out.tail_sum = std::pow(2.0, -k) - std::pow(2.0, -s_max);
  out.integral_u = integral_u.sum;
  out.integral_bound = integral_bound.sum;
  out.witness = witness.sum;
  out.witness_bound = witness_bound.sum;
  return out;
}

ExampleReport example_construction(int k, int s_max, int resolution) {
  require_resolution(resolution, "example_construction");
  const ConstructionValues v = construction_values(k, s_max, resolution);

  ExampleReport report;
  report.example = "v0-example";
  report.index = k;
  report.computed = {
      {"eta_tail", v.eta_tail},
      {"rho_tail", v.rho_tail},
      {"integral_u", v.integral_u},
      {"witness", v.witness},
  };
  report.bounds = {
      {"eta_tail_eq", v.tail_sum},
      {"rho_tail_le", v.tail_sum},
      {"integral_u_le", v.integral_bound},
      {"witness_ge", v.witness_bound},
  };
  report.pass =
      std::fabs(v.eta_tail - v.tail_sum) <= 1e-10 &&
      v.rho_tail <= v.tail_sum * (1.0 + 1e-12) &&
      v.integral_u <= v.integral_bound &&
      v.witness >= v.witness_bound * (1.0 - 1e-12);
  return report;
}

ExampleReport pimpliesq_demo(int resolution) {
  require_resolution(resolution, "pimpliesq_demo");
  constexpr long kSweepEnd = 200;
  constexpr double kThresholdP = 1e-3;
  constexpr double kThresholdQ = 1e-2;

  bool implication_holds = true;
  bool q_monotone = true;
  double prev_rho_q = std::numeric_limits<double>::infinity();
  RemarkValues at_50;
  double rho_q_50 = 0.0;
  RemarkValues at_end;
  double rho_q_end = 0.0;

  for (long j = 2; j <= kSweepEnd; ++j) {
    const RemarkValues v = remark_values(j, resolution);
    const double rq = remark_rho_q(j);
    if (v.rho_p < kThresholdP && rq >= kThresholdQ) implication_holds = false;
    if (j >= 3 && rq > prev_rho_q) q_monotone = false;
    prev_rho_q = rq;
    if (j == 50) {
      at_50 = v;
      rho_q_50 = rq;
    }
    if (j == kSweepEnd) {
      at_end = v;
      rho_q_end = rq;
    }
  }

  // The bounded exponent must also be exponentially integrable on (0, 1/2).
  const Grid q_grid = build_grid(Domain::interval(0.0, 0.5),
                                 {resolution + 1, 1});
  const ExponentField q =
      make_exponent(q_grid, [](double, double) { return 2.0; });
  const ExtendedReal q_integral = exp_integrability_check(q);

  ExampleReport report;
  report.example = "pimpliesq";
  report.index = kSweepEnd;
  report.computed = {
      {"rho_p_50", at_50.rho_p},
      {"rho_q_50", rho_q_50},
      {"rho_p_200", at_end.rho_p},
      {"rho_q_200", rho_q_end},
      {"q_exp_integral",
       q_integral.is_finite()
           ? q_integral.value()
           : std::numeric_limits<double>::infinity()},
  };
  report.bounds = {
      {"transfer_threshold_p", kThresholdP},
      {"transfer_threshold_q", kThresholdQ},
      {"rho_q_50_lt", kThresholdQ},
  };
  report.pass = implication_holds && q_monotone && q_integral.is_finite() &&
                rho_q_50 < kThresholdQ &&
                at_50.rho_p <=
                    at_50.eta_p / 50.0 * (1.0 + 1e-12);
  return report;
}

}  // namespace varex
