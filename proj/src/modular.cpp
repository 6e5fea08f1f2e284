#include <varex/modular.hpp>

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "cell_kernels.hpp"

namespace varex {

namespace {

struct KindWeights {
  bool use_value = false;
  bool use_grad = false;
  bool divide_by_p = false;
};

KindWeights weights_for(ModularKind kind) {
  switch (kind) {
    case ModularKind::RHO_P:
      return {true, false, true};
    case ModularKind::ETA_P:
      return {true, false, false};
    case ModularKind::RHO_GRAD:
      return {false, true, true};
    case ModularKind::RHO_1P:
      return {true, true, true};
    case ModularKind::ETA_GRAD:
      return {false, true, false};
  }
  throw std::logic_error("unknown modular kind");
}

void require_same_grid(const GridFunction& u, const ExponentField& p) {
  if (u.grid() != p.grid()) {
    throw std::invalid_argument(
        "modular_eval: function and exponent live on different grids");
  }
}

}  // namespace

ExtendedReal modular_eval(ModularKind kind, const GridFunction& u,
                          const ExponentField& p) {
  require_same_grid(u, p);
  const Grid& grid = u.grid();
  const KindWeights w = weights_for(kind);
  const double measure = grid.cell_measure();
  const std::size_t n_cells = grid.cell_count();

  detail::KahanSum acc;
  std::size_t corners[4];
  for (std::size_t c = 0; c < n_cells; ++c) {
    const int n_corners = grid.cell_corners(c, corners);
    const double pc = p[c];
    double term = 0.0;

    if (w.use_value) {
      double a = 0.0;
      for (int k = 0; k < n_corners; ++k) a += u[corners[k]];
      a /= static_cast<double>(n_corners);
      double t;
      if (!detail::sat_pow(std::fabs(a), pc, t)) return ExtendedReal::infinity();
      term += t;
    }

    if (w.use_grad) {
      double gn;
      if (n_corners == 2) {
        const double inv_h = 1.0 / grid.spacing(0);
        gn = std::fabs((u[corners[1]] - u[corners[0]]) * inv_h);
      } else {
        const double cx = 1.0 / (2.0 * grid.spacing(0));
        const double cy = 1.0 / (2.0 * grid.spacing(1));
        const double gx = ((u[corners[1]] - u[corners[0]]) +
                           (u[corners[3]] - u[corners[2]])) *
                          cx;
        const double gy = ((u[corners[2]] - u[corners[0]]) +
                           (u[corners[3]] - u[corners[1]])) *
                          cy;
        gn = std::hypot(gx, gy);
      }
      double t;
      if (!detail::sat_pow(gn, pc, t)) return ExtendedReal::infinity();
      term += t;
    }

    if (w.divide_by_p) term /= pc;
    acc.add(term * measure);
    if (!std::isfinite(acc.sum)) return ExtendedReal::infinity();
  }
  return ExtendedReal::finite(acc.sum);
}

ExtendedReal modular_distance(ModularKind kind, const GridFunction& u,
                              const GridFunction& v, const ExponentField& p) {
  return modular_eval(kind, u - v, p);
}

double luxemburg_norm(ModularKind kind, const GridFunction& u,
                      const ExponentField& p, double tol) {
  if (!(tol > 0.0)) {
    throw std::invalid_argument("luxemburg_norm: tol must be positive");
  }
  const ExtendedReal base = modular_eval(kind, u, p);
  if (base.is_finite() && base.value() == 0.0) return 0.0;

  // True iff modular(u / lambda) <= 1; saturation counts as "greater".
  const auto inside = [&](double lambda) {
    const ExtendedReal m = modular_eval(kind, (1.0 / lambda) * u, p);
    return m.leq(1.0);
  };

  constexpr int kMaxBracket = 4096;
  double lo;
  double hi;
  if (inside(1.0)) {
    hi = 1.0;
    lo = 0.5;
    int guard = 0;
    while (inside(lo)) {
      hi = lo;
      lo *= 0.5;
      if (++guard > kMaxBracket || lo == 0.0) {
        throw std::runtime_error(
            "luxemburg_norm: bracketing failed from below");
      }
    }
  } else {
    lo = 1.0;
    hi = 2.0;
    int guard = 0;
    while (!inside(hi)) {
      lo = hi;
      hi *= 2.0;
      if (++guard > kMaxBracket || !std::isfinite(hi)) {
        throw std::runtime_error(
            "luxemburg_norm: bracketing failed from above");
      }
    }
  }

  int guard = 0;
  while (hi - lo > tol * hi) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket exhausted double precision
    if (inside(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
    if (++guard > 20000) break;
  }
  return hi;
}

ExtendedReal delta2_ratio(ModularKind kind, const GridFunction& u,
                          const ExponentField& p) {
  const ExtendedReal denom = modular_eval(kind, u, p);
  if (!denom.is_finite()) {
    throw std::invalid_argument(
        "delta2_ratio: modular of u is saturated; the ratio is undefined");
  }
  if (denom.value() == 0.0) {
    throw std::invalid_argument(
        "delta2_ratio: modular of u vanishes; the ratio is undefined");
  }
  const ExtendedReal numer = modular_eval(kind, 2.0 * u, p);
  if (!numer.is_finite()) return ExtendedReal::infinity();
  return ExtendedReal::finite(numer.value() / denom.value());
}

}  // namespace varex
