#pragma once

#include <cmath>
#include <ostream>

#include "stringcap/errors.hpp"

namespace stringcap {

/// A nonnegative real or +infinity, kept as a tag rather than a float sentinel.
class ExtendedReal {
 public:
  static ExtendedReal finite(double x) {
    if (std::isnan(x) || std::isinf(x)) {
      throw InvalidInputError("ExtendedReal::finite called with a non-finite value");
    }
    return ExtendedReal(x, false);
  }
  static ExtendedReal infinite() { return ExtendedReal(0.0, true); }

  bool is_finite() const { return !infinite_; }
  bool is_infinite() const { return infinite_; }

  /// Throws if infinite.
  double value() const {
    if (infinite_) throw InvalidInputError("value() requested from an infinite ExtendedReal");
    return value_;
  }

  ExtendedReal scaled(double lambda) const {
    if (infinite_) return lambda == 0.0 ? finite(0.0) : infinite();
    return finite(lambda * value_);
  }

  friend bool operator==(const ExtendedReal& a, const ExtendedReal& b) {
    return a.infinite_ == b.infinite_ && (a.infinite_ || a.value_ == b.value_);
  }

  /// a <= b + slack, treating +inf as the top element.
  friend bool leq(const ExtendedReal& a, const ExtendedReal& b, double slack = 0.0) {
    if (b.infinite_) return true;
    if (a.infinite_) return false;
    return a.value_ <= b.value_ + slack;
  }

  friend std::ostream& operator<<(std::ostream& os, const ExtendedReal& x) {
    if (x.infinite_) return os << "+inf";
    return os << x.value_;
  }

 private:
  ExtendedReal(double v, bool inf) : value_(v), infinite_(inf) {}
  double value_;
  bool infinite_;
};

}  // namespace stringcap
