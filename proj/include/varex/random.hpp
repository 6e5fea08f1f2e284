#pragma once

// Deterministic random draws for probes and stress tests.
//
// std::uniform_real_distribution and std::normal_distribution are
// implementation-defined, so the mapping from raw mt19937_64 output to
// doubles is spelled out here; the same seed yields the same stream on
// every platform.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace varex {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [a, b).
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Rejection-free modulo is biased for huge n; all callers use small n
    // where the bias is far below any tolerance in play, and determinism
    // matters more than a perfectly uniform tail.
    return gen_() % n;
  }

  /// Standard normal via Box-Muller (pairs generated, one cached).
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps log finite
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi_v<double> * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace varex
