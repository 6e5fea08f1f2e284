#pragma once

// Shared cell-loop helpers for modulars and energies (internal).

#include <cmath>

namespace varex::detail {

// exp() overflows just above 709.78; treat anything past 709 as saturated so
// every representable term stays finite.
constexpr double kPowSaturationLog = 709.0;

// |mag|^p for mag >= 0, p > 1. Returns false when the term saturates the
// finite range (the caller maps that to +inf for the whole integral).
inline bool sat_pow(double mag, double p, double& out) {
  if (mag == 0.0) {
    out = 0.0;
    return true;
  }
  if (p * std::log(mag) > kPowSaturationLog) return false;
  out = std::pow(mag, p);
  return true;
}

struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double term) {
    double t = term - comp;
    double next = sum + t;
    comp = (next - sum) - t;
    sum = next;
  }
};

}  // namespace varex::detail
