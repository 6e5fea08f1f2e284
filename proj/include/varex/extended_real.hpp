#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace varex {

/// Value in [0, +inf]. Used as the codomain of modulars and energies so that
/// overflow saturates to a typed infinity instead of silently producing NaN.
/// Addition absorbs into infinity; finite values are always >= 0.
class ExtendedReal {
 public:
  ExtendedReal() : value_(0.0), inf_(false) {}

  static ExtendedReal finite(double v) {
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("ExtendedReal::finite: value must be finite and >= 0, got " +
                                  std::to_string(v));
    ExtendedReal r;
    r.value_ = v;
    return r;
  }

  static ExtendedReal infinity() {
    ExtendedReal r;
    r.inf_ = true;
    r.value_ = 0.0;
    return r;
  }

  bool is_finite() const { return !inf_; }

  /// Finite value; throws when called on +inf.
  double value() const {
    if (inf_) throw std::logic_error("ExtendedReal::value: value is +inf");
    return value_;
  }

  /// Finite value or +inf as a double (for printing and comparisons only).
  double as_double() const { return inf_ ? std::numeric_limits<double>::infinity() : value_; }

  ExtendedReal& operator+=(const ExtendedReal& o) {
    if (inf_ || o.inf_) {
      inf_ = true;
      value_ = 0.0;
    } else {
      value_ += o.value_;
    }
    return *this;
  }

  friend ExtendedReal operator+(ExtendedReal a, const ExtendedReal& b) {
    a += b;
    return a;
  }

  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    return a.inf_ == b.inf_ && (a.inf_ || a.value_ == b.value_);
  }

  /// Total order with +inf greater than every finite value.
  friend bool operator<(const ExtendedReal& a, const ExtendedReal& b) {
    if (a.inf_) return false;
    if (b.inf_) return true;
    return a.value_ < b.value_;
  }
  friend bool operator<=(const ExtendedReal& a, const ExtendedReal& b) { return a < b || a == b; }
  friend bool operator>(const ExtendedReal& a, const ExtendedReal& b) { return b < a; }
  friend bool operator>=(const ExtendedReal& a, const ExtendedReal& b) { return b <= a; }

  bool leq(double c) const { return !inf_ && value_ <= c; }

 private:
  double value_;
  bool inf_;
};

}  // namespace varex
