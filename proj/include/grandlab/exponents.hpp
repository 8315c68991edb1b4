#pragma once

// Closed-form exponent machinery for indicator witnesses: the maximizing
// epsilon of an indicator's grand norm, the matched target exponent eta,
// the growth factor of the ratio bound, and the phi function of the
// Sobolev-composed grand space.

#include <cmath>
#include <string>

#include "grandlab/errors.hpp"
#include "grandlab/sobolev_pair.hpp"

namespace grandlab {

/// d/d eps of ln((eps^theta |J|)^{1/(p-eps)}), times (p - eps):
///   ln(eps^theta |J|)/(p - eps) + theta/eps.
inline double stationarity_residual(double p, double theta, double log_absJ, double eps) {
  return (theta * std::log(eps) + log_absJ) / (p - eps) + theta / eps;
}

/**
 * Maximizer of eps ↦ (eps^theta |J|)^{1/(p-eps)} on (0, p-1], given ln|J|.
 *
 * (p - eps) times the stationarity residual is
 *   h(eps) = theta ln eps + ln|J| + theta (p - eps)/eps,
 * whose derivative theta (eps - p)/eps^2 is negative, so the root is unique
 * and bisection on h is safe. If h(p - 1) >= 0 the objective is still rising
 * at the right end and the maximizer is the boundary p - 1.
 */
inline double epsilon_J_log(double p, double theta, double log_absJ) {
  if (!(p > 1.0)) throw UsageError("epsilon_J: need p > 1");
  if (!(theta > 0.0)) throw UsageError("epsilon_J: need theta > 0");
  if (!(log_absJ <= 0.0)) throw UsageError("epsilon_J: need |J| <= 1");
  auto h = [&](double e) { return theta * std::log(e) + log_absJ + theta * (p - e) / e; };
  double hi = p - 1.0;
  if (h(hi) >= 0.0) return hi;
  double lo = 1e-12;
  if (!(h(lo) > 0.0)) throw NonConvergent("epsilon_J: no sign change on (1e-12, p-1]");
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (h(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double epsilon_J(double p, double theta, double absJ) {
  if (!(absJ > 0.0 && absJ <= 1.0)) throw UsageError("epsilon_J: need 0 < |J| <= 1");
  return epsilon_J_log(p, theta, std::log(absJ));
}

/// ‖χ_J‖ in L^{p),theta} on [0,1] with w ≡ 1, from ln|J|.
inline double chi_grand_norm_log(double p, double theta, double log_absJ) {
  const double e = epsilon_J_log(p, theta, log_absJ);
  return std::exp((theta * std::log(e) + log_absJ) / (p - e));
}

inline double chi_grand_norm(double p, double theta, double absJ) {
  if (!(absJ > 0.0 && absJ <= 1.0)) throw UsageError("chi_grand_norm: need 0 < |J| <= 1");
  return chi_grand_norm_log(p, theta, std::log(absJ));
}

/**
 * eta with 1/(p - eps) - 1/(q - eta) = alpha, i.e.
 *   eta = q - (p - eps)/(1 - alpha (p - eps)).
 * Evaluated in the cancellation-free form eps / ((1 - alpha p)(1 - alpha p + alpha eps)).
 */
inline double eta_J(const SobolevPair& pair, double eps) {
  const double p = pair.p();
  const double a = pair.alpha();
  if (!(eps >= 0.0 && eps <= p - 1.0)) throw DomainError("eta_J: need 0 <= eps <= p-1");
  const double d0 = 1.0 - a * p;
  const double d = d0 + a * eps;
  if (!(d > 0.0)) throw DomainError("eta_J: alpha (p - eps) >= 1");
  return eps / (d0 * d);
}

/// [eta/eps]^{theta2/(p-eps) - alpha theta2} * eps^{(theta2-theta1)/(p-eps) - alpha theta2}.
inline double divergence_factor(const SobolevPair& pair, double theta1, double theta2, double eps) {
  const double p = pair.p();
  const double a = pair.alpha();
  if (!(eps > 0.0 && eps <= p - 1.0)) throw DomainError("divergence_factor: need 0 < eps <= p-1");
  const double eta = eta_J(pair, eps);
  const double e1 = theta2 / (p - eps) - a * theta2;
  const double e2 = (theta2 - theta1) / (p - eps) - a * theta2;
  return std::exp(e1 * std::log(eta / eps) + e2 * std::log(eps));
}

/**
 * phi(u) = [(u - q)/(1 - alpha (u - q)) + p]^{1 - (u - q) alpha}.
 *
 * Because p alpha q = q - p, the base simplifies to
 * u (1 - alpha p) / (1 - alpha (u - q)), which is evaluated directly.
 * Near 0, phi(u) ~ (1 + alpha q)^{-2(1 + alpha q)} u^{1 + alpha q}.
 */
inline double phi_alpha(double u, const SobolevPair& pair) {
  const double a = pair.alpha();
  const double q = pair.q();
  const double den = 1.0 - a * (u - q);
  if (!(den > 0.0)) throw DomainError("phi_alpha: 1 - alpha (u - q) <= 0");
  const double base = u * (1.0 - a * pair.p()) / den;
  if (!(base > 0.0)) throw DomainError("phi_alpha: nonpositive base at u=" + std::to_string(u));
  return std::pow(base, 1.0 - (u - q) * a);
}

}  // namespace grandlab
