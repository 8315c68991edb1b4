#pragma once

#include <cmath>
#include <string>

#include "grandlab/errors.hpp"

namespace grandlab {

/// Hardy-Littlewood-Sobolev exponents: 1 < p < 1/alpha, q = p / (1 - alpha p),
/// p' = p / (p - 1). Construction checks 1/p - 1/q = alpha and 1 + alpha q = q/p.
class SobolevPair {
 public:
  SobolevPair(double p, double alpha) : p_(p), alpha_(alpha) {
    if (!(p > 1.0)) throw UsageError("need p > 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw UsageError("need 0 < alpha < 1");
    if (!(alpha * p < 1.0)) throw UsageError("need alpha < 1/p");
    q_ = p / (1.0 - alpha * p);
    pprime_ = p / (p - 1.0);
    if (std::abs(1.0 / p_ - 1.0 / q_ - alpha_) > 1e-12 ||
        std::abs(1.0 + alpha_ * q_ - q_ / p_) > 1e-12 * (q_ / p_)) {
      throw DomainError("Sobolev exponent identities violated for p=" + std::to_string(p) +
                        ", alpha=" + std::to_string(alpha));
    }
  }

  double p() const { return p_; }
  double alpha() const { return alpha_; }
  double q() const { return q_; }
  double pprime() const { return pprime_; }

  /// 1 + alpha q (equal to q/p); theta2 below threshold() * theta1 is the
  /// unbounded regime.
  double threshold_factor() const { return 1.0 + alpha_ * q_; }

 private:
  double p_;
  double alpha_;
  double q_ = 0.0;
  double pprime_ = 0.0;
};

}  // namespace grandlab
