#include <varex/inequalities.hpp>

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <varex/random.hpp>

#include "cell_kernels.hpp"

namespace varex {

namespace {

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double xi : x) s += xi * xi;
  return std::sqrt(s);
}

void require_pair(std::span<const double> u, std::span<const double> v) {
  if (u.empty() || u.size() != v.size()) {
    throw std::invalid_argument(
        "inequality check: vectors must be nonempty and of equal size");
  }
}

}  // namespace

InequalityCheck clarkson_low(std::span<const double> u,
                             std::span<const double> v, double p) {
  require_pair(u, v);
  if (!(p >= 1.0 && p <= 2.0)) {
    throw std::invalid_argument("clarkson_low: requires 1 <= p <= 2");
  }
  const double nu = norm2(u);
  const double nv = norm2(v);
  if (nu + nv == 0.0) {
    throw std::invalid_argument("clarkson_low: u and v must not both vanish");
  }
  double mid_sq = 0.0;
  double diff_sq = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double m = 0.5 * (u[i] + v[i]);
    const double d = u[i] - v[i];
    mid_sq += m * m;
    diff_sq += d * d;
  }
  const double sharpener = p * (p - 1.0) / std::pow(2.0, p + 1.0) * diff_sq /
                           std::pow(nu + nv, 2.0 - p);
  InequalityCheck out;
  out.lhs = std::pow(mid_sq, 0.5 * p) + sharpener;
  out.rhs = 0.5 * (std::pow(nu, p) + std::pow(nv, p));
  return out;
}

InequalityCheck clarkson_high(std::span<const double> u,
                              std::span<const double> v, double p) {
  require_pair(u, v);
  if (!(p >= 2.0)) {
    throw std::invalid_argument("clarkson_high: requires p >= 2");
  }
  double mid_sq = 0.0;
  double half_diff_sq = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double m = 0.5 * (u[i] + v[i]);
    const double d = 0.5 * (u[i] - v[i]);
    mid_sq += m * m;
    half_diff_sq += d * d;
  }
  InequalityCheck out;
  out.lhs = std::pow(mid_sq, 0.5 * p) + std::pow(half_diff_sq, 0.5 * p);
  out.rhs = 0.5 * (std::pow(norm2(u), p) + std::pow(norm2(v), p));
  return out;
}

bool lemma_stupid_check(std::span<const double> t_samples) {
  if (t_samples.empty()) {
    throw std::invalid_argument("lemma_stupid_check: no samples");
  }
  double prev_t = 1.0;
  for (double t : t_samples) {
    if (!(t > 1.0)) {
      throw std::invalid_argument("lemma_stupid_check: samples must exceed 1");
    }
    if (!(t > prev_t)) {
      throw std::invalid_argument(
          "lemma_stupid_check: samples must be strictly increasing");
    }
    prev_t = t;
  }

  const auto f = [](double t) { return std::log(t) / (t - 1.0); };
  double prev_f = 1.0;  // f(t) -> 1 as t -> 1+, and every sample has t > 1
  for (double t : t_samples) {
    const double ft = f(t);
    if (!(ft < 1.0)) return false;
    if (!(ft < prev_f)) return false;
    if (!(std::pow(t, 1.0 / (t - 1.0)) < std::numbers::e_v<double>)) {
      return false;
    }
    prev_f = ft;
  }
  // Limit behavior at the left end of the range: just above 1 the ratio is
  // already within 1e-6 of its supremum.
  const double near_one = f(1.0 + 1e-8);
  return near_one > 1.0 - 1e-6 && near_one < 1.0;
}

namespace {

// Draws one nodal function: either dense uniform noise or a sparse spike
// pattern, chosen by coin flip so the probe sees both mass regimes.
std::vector<double> draw_function(Rng& rng, std::size_t n_nodes) {
  std::vector<double> vals(n_nodes, 0.0);
  const bool dense = rng.uniform01() < 0.5;
  if (dense) {
    for (auto& v : vals) v = rng.uniform(-2.0, 2.0);
  } else {
    const std::size_t spikes = n_nodes / 8 + 1;
    for (std::size_t s = 0; s < spikes; ++s) {
      const auto at = static_cast<std::size_t>(rng.below(n_nodes));
      vals[at] = rng.uniform(-2.0, 2.0);
    }
  }
  return vals;
}

}  // namespace

UcStarEstimate uc_star_probe(ModularKind kind, const ExponentField& p,
                             double epsilon, long n_samples,
                             std::uint64_t seed) {
  if (kind != ModularKind::RHO_P && kind != ModularKind::RHO_GRAD &&
      kind != ModularKind::RHO_1P) {
    throw std::invalid_argument(
        "uc_star_probe: kind must be RHO_P, RHO_GRAD or RHO_1P");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw std::invalid_argument("uc_star_probe: requires 0 < epsilon < 1");
  }
  if (n_samples <= 0) {
    throw std::invalid_argument("uc_star_probe: n_samples must be positive");
  }

  const Grid& grid = p.grid();
  const std::size_t n_nodes = grid.node_count();
  Rng rng(seed);

  UcStarEstimate est;
  est.epsilon = epsilon;
  const double pm = p.p_minus();
  est.delta_formula =
      std::min(0.5 * epsilon, (pm - 1.0) * epsilon * epsilon / 32.0);
  est.n_samples = n_samples;

  double max_ratio = 0.0;
  for (long s = 0; s < n_samples; ++s) {
    GridFunction u(grid, draw_function(rng, n_nodes));
    GridFunction v(grid, draw_function(rng, n_nodes));
    const ExtendedReal mu = modular_eval(kind, u, p);
    const ExtendedReal mv = modular_eval(kind, v, p);
    if (!mu.is_finite() || !mv.is_finite()) continue;
    const double avg = 0.5 * (mu.value() + mv.value());
    if (avg == 0.0) continue;
    // By convexity both half-sum and half-difference modulars stay <= avg,
    // hence finite here.
    const double sep = modular_eval(kind, 0.5 * (u - v), p).value();
    if (sep < epsilon * avg) continue;
    ++est.n_admissible;
    const double ratio = modular_eval(kind, 0.5 * (u + v), p).value() / avg;
    if (ratio > max_ratio) max_ratio = ratio;
  }
  est.delta_empirical = est.n_admissible > 0 ? 1.0 - max_ratio : 1.0;
  return est;
}

MonotonicityGap monotonicity_gap(std::span<const double> a,
                                 std::span<const double> b, double p) {
  require_pair(a, b);
  if (!(p >= 2.0)) {
    throw std::invalid_argument("monotonicity_gap: requires p >= 2");
  }
  const double na = norm2(a);
  const double nb = norm2(b);
  const double fa = na > 0.0 ? std::pow(na, p - 2.0) : 0.0;
  const double fb = nb > 0.0 ? std::pow(nb, p - 2.0) : 0.0;
  double pairing = 0.0;
  double diff_sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    pairing += (fa * a[i] - fb * b[i]) * d;
    diff_sq += d * d;
  }
  if (diff_sq == 0.0) {
    throw std::invalid_argument("monotonicity_gap: A and B coincide");
  }
  MonotonicityGap out;
  out.normalized_pairing = pairing / std::pow(diff_sq, 0.5 * p);
  out.gamma_bound = std::pow(2.0, 2.0 - p);
  return out;
}

}  // namespace varex
