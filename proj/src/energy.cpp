#include <varex/energy.hpp>

#include <cmath>
#include <cstddef>

#include <varex/modular.hpp>

#include "cell_kernels.hpp"

namespace varex {

namespace {

void require_zero_boundary(const Grid& grid, std::span<const double> w,
                           const char* who) {
  for (std::size_t n = 0; n < grid.node_count(); ++n) {
    if (grid.is_boundary_node(n) && w[n] != 0.0) {
      throw std::invalid_argument(std::string(who) +
                                  ": argument must vanish on the boundary");
    }
  }
}

void require_compatible(const ProblemData& data, const GridFunction& w,
                        const char* who) {
  if (w.grid() != data.grid()) {
    throw std::invalid_argument(std::string(who) +
                                ": function lives on a different grid");
  }
  require_zero_boundary(data.grid(), w.values(), who);
}

const std::vector<double>& weights_or_throw(EnergyKind kind,
                                            const ProblemData& data) {
  static const std::vector<double> none;
  if (kind != EnergyKind::J_WEIGHTED) return none;
  if (!data.q()) {
    throw std::invalid_argument(
        "energy: J_WEIGHTED requires per-cell weights q");
  }
  return *data.q();
}

// Core cell loop. With WithGrad the exact partial derivatives with respect
// to the corner values of w are scattered into grad_out.
template <bool WithGrad>
ExtendedReal accumulate(EnergyKind kind, const ProblemData& data,
                        std::span<const double> w,
                        std::span<double> grad_out) {
  const Grid& grid = data.grid();
  const ExponentField& p = data.p();
  const GridFunction& phi = data.phi();
  const std::vector<double>& q = weights_or_throw(kind, data);

  const double measure = grid.cell_measure();
  const bool one_d = grid.dim() == 1;
  const double inv_h = one_d ? 1.0 / grid.spacing(0) : 0.0;
  const double cx = one_d ? 0.0 : 1.0 / (2.0 * grid.spacing(0));
  const double cy = one_d ? 0.0 : 1.0 / (2.0 * grid.spacing(1));

  if constexpr (WithGrad) {
    for (auto& g : grad_out) g = 0.0;
  }

  detail::KahanSum acc;
  std::size_t corners[4];
  double d[4];
  for (std::size_t c = 0; c < grid.cell_count(); ++c) {
    const int nc = grid.cell_corners(c, corners);
    for (int k = 0; k < nc; ++k) d[k] = w[corners[k]] - phi[corners[k]];
    const double pc = p[c];

    // Per-kind weights of the two integrand components and the multipliers
    // their derivatives carry after the 1/p (or q/p) factor is applied.
    double value_w = 0.0;
    double grad_w = 0.0;
    double value_mult = 0.0;
    double grad_mult = 0.0;
    switch (kind) {
      case EnergyKind::F_FULL:
        value_w = 1.0 / pc;
        grad_w = 1.0 / pc;
        value_mult = 1.0;
        grad_mult = 1.0;
        break;
      case EnergyKind::F_GRAD:
        grad_w = 1.0 / pc;
        grad_mult = 1.0;
        break;
      case EnergyKind::J_WEIGHTED:
        value_w = q[c] / pc;
        grad_w = 1.0 / pc;
        value_mult = q[c];
        grad_mult = 1.0;
        break;
      case EnergyKind::G_UNWEIGHTED:
        grad_w = 1.0;
        grad_mult = pc;
        break;
    }

    double term = 0.0;
    double dvalue = 0.0;  // d/da of the value component, times value_mult
    double a = 0.0;
    if (value_w != 0.0) {
      for (int k = 0; k < nc; ++k) a += d[k];
      a /= static_cast<double>(nc);
      double t;
      if (!detail::sat_pow(std::fabs(a), pc, t)) return ExtendedReal::infinity();
      term += value_w * t;
      if constexpr (WithGrad) {
        if (a != 0.0) {
          dvalue = value_mult * std::pow(std::fabs(a), pc - 1.0) *
                   (a > 0.0 ? 1.0 : -1.0);
        }
      }
    }

    double gx = 0.0;
    double gy = 0.0;
    double gn = 0.0;
    if (one_d) {
      gx = (d[1] - d[0]) * inv_h;
      gn = std::fabs(gx);
    } else {
      gx = ((d[1] - d[0]) + (d[3] - d[2])) * cx;
      gy = ((d[2] - d[0]) + (d[3] - d[1])) * cy;
      gn = std::hypot(gx, gy);
    }
    {
      double t;
      if (!detail::sat_pow(gn, pc, t)) return ExtendedReal::infinity();
      term += grad_w * t;
    }

    acc.add(term * measure);
    if (!std::isfinite(acc.sum)) return ExtendedReal::infinity();

    if constexpr (WithGrad) {
      double fx = 0.0;
      double fy = 0.0;
      if (gn != 0.0) {
        const double scale = grad_mult * std::pow(gn, pc - 2.0);
        fx = scale * gx;
        fy = scale * gy;
      }
      const double davg = dvalue / static_cast<double>(nc);
      if (one_d) {
        grad_out[corners[0]] += measure * (davg - fx * inv_h);
        grad_out[corners[1]] += measure * (davg + fx * inv_h);
      } else {
        grad_out[corners[0]] += measure * (davg - fx * cx - fy * cy);
        grad_out[corners[1]] += measure * (davg + fx * cx - fy * cy);
        grad_out[corners[2]] += measure * (davg - fx * cx + fy * cy);
        grad_out[corners[3]] += measure * (davg + fx * cx + fy * cy);
      }
    }
  }

  if constexpr (WithGrad) {
    // The minimization variable is the interior values only; partials with
    // respect to pinned boundary nodes are not part of the gradient.
    bool finite = true;
    for (std::size_t n = 0; n < grid.node_count(); ++n) {
      if (grid.is_boundary_node(n)) {
        grad_out[n] = 0.0;
      } else if (!std::isfinite(grad_out[n])) {
        finite = false;
      }
    }
    if (!finite) return ExtendedReal::infinity();
  }
  return ExtendedReal::finite(acc.sum);
}

}  // namespace

ProblemData::ProblemData(ExponentField p, GridFunction phi,
                         std::optional<std::vector<double>> q)
    : p_(std::move(p)), phi_(std::move(phi)), q_(std::move(q)) {
  if (p_.grid() != phi_.grid()) {
    throw std::invalid_argument(
        "ProblemData: exponent and boundary datum live on different grids");
  }
  if (q_) {
    if (q_->size() != grid().cell_count()) {
      throw std::invalid_argument(
          "ProblemData: q must carry one weight per cell");
    }
    for (double qc : *q_) {
      if (!std::isfinite(qc) || qc < 0.0) {
        throw std::invalid_argument(
            "ProblemData: q weights must be finite and nonnegative");
      }
    }
  }
  if (!modular_eval(ModularKind::RHO_1P, phi_, p_).is_finite()) {
    throw SaturationError(
        "ProblemData: boundary datum has saturated full modular; shrink the "
        "data or refine the exponent");
  }
}

ExtendedReal energy(EnergyKind kind, const ProblemData& data,
                    const GridFunction& w) {
  require_compatible(data, w, "energy");
  return detail::energy_raw(kind, data, w.values());
}

GridFunction gateaux_gradient(EnergyKind kind, const ProblemData& data,
                              const GridFunction& w) {
  require_compatible(data, w, "gateaux_gradient");
  std::vector<double> grad(data.grid().node_count(), 0.0);
  const ExtendedReal e = detail::energy_and_gradient_raw(
      kind, data, w.values(), grad);
  if (!e.is_finite()) {
    throw SaturationError(
        "gateaux_gradient: energy is not finite at this point");
  }
  return GridFunction(data.grid(), std::move(grad));
}

double directional_derivative(EnergyKind kind, const ProblemData& data,
                              const GridFunction& w, const GridFunction& h) {
  require_compatible(data, w, "directional_derivative");
  require_compatible(data, h, "directional_derivative");
  const GridFunction g = gateaux_gradient(kind, data, w);
  detail::KahanSum acc;
  for (std::size_t n = 0; n < g.size(); ++n) acc.add(g[n] * h[n]);
  return acc.sum;
}

namespace detail {

ExtendedReal energy_raw(EnergyKind kind, const ProblemData& data,
                        std::span<const double> w) {
  return accumulate<false>(kind, data, w, {});
}

ExtendedReal energy_and_gradient_raw(EnergyKind kind, const ProblemData& data,
                                     std::span<const double> w,
                                     std::span<double> grad_out) {
  return accumulate<true>(kind, data, w, grad_out);
}

}  // namespace detail

}  // namespace varex
