#pragma once

#include <string>

#include "grandlab/errors.hpp"

namespace grandlab {

/// Closed subinterval [a, b] of [0, 1] with a < b.
class Interval {
 public:
  Interval(double a, double b) : a_(a), b_(b) {
    if (!(a >= 0.0 && b <= 1.0 && a < b)) {
      throw InvalidInterval("invalid interval [" + std::to_string(a) + ", " +
                            std::to_string(b) + "]");
    }
  }

  static Interval unit() { return {0.0, 1.0}; }

  double a() const { return a_; }
  double b() const { return b_; }
  double length() const { return b_ - a_; }
  bool contains(double x) const { return a_ <= x && x <= b_; }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  double a_;
  double b_;
};

}  // namespace grandlab
