#include "varex/exponent.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace varex {

namespace {
// exp(x) stays below DBL_MAX up to ~709.78; stay on the safe side.
constexpr double kExpSaturation = 709.0;
}  // namespace

ExponentField make_exponent(const Grid& g, const std::function<double(double, double)>& p) {
  ExponentField f;
  f.grid_ = g;
  f.values_.resize(g.cell_count());
  double lo = 0.0, hi = 0.0;
  for (std::size_t c = 0; c < g.cell_count(); ++c) {
    auto xy = g.cell_midpoint(c);
    double v = p(xy[0], xy[1]);
    if (!std::isfinite(v))
      throw std::invalid_argument("make_exponent: non-finite sample at cell " + std::to_string(c));
    if (v <= 1.0)
      throw std::invalid_argument("make_exponent: exponent sample " + std::to_string(v) +
                                  " <= 1 at cell " + std::to_string(c));
    f.values_[c] = v;
    if (c == 0) {
      lo = hi = v;
    } else {
      if (v < lo) lo = v;
      if (v > hi) hi = v;
    }
  }
  f.p_minus_ = lo;
  f.p_max_ = hi;
  return f;
}

bool admissible_for_dirichlet(const ExponentField& p, int dim) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("admissible_for_dirichlet: dim must be 1 or 2");
  return p.p_minus() > static_cast<double>(dim);
}

ExtendedReal exp_integrability_check(const ExponentField& q) {
  double m = q.grid().cell_measure();
  double sum = 0.0, comp = 0.0;
  for (double v : q.values()) {
    if (v > kExpSaturation) return ExtendedReal::infinity();
    double term = std::exp(v) / v * m - comp;
    double next = sum + term;
    comp = (next - sum) - term;
    sum = next;
  }
  if (!std::isfinite(sum)) return ExtendedReal::infinity();
  return ExtendedReal::finite(sum);
}

}  // namespace varex
