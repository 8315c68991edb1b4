#pragma once

/**
 * @file grand_norm.hpp
 * @brief Weighted grand Lebesgue norms on [0,1].
 *
 *   ‖f‖_{p),phi} = sup_{0 < eps <= p-1} ( phi(eps) ∫ |f|^{p-eps} w )^{1/(p-eps)}
 *
 * with phi(eps) = eps^theta for the L^{p),theta}_w spaces. The domain has
 * measure 1, so no normalization factor appears. The supremum is searched on
 * a log-spaced grid of (eps_min, p-1] and refined by golden section in the
 * winning cell; probes below eps_min are not taken (the objective tends to 0
 * there whenever phi(0+) = 0 and f is in some L^{p-delta}).
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grandlab/errors.hpp"
#include "grandlab/exponents.hpp"
#include "grandlab/func01.hpp"
#include "grandlab/interval.hpp"
#include "grandlab/lebesgue.hpp"
#include "grandlab/sobolev_pair.hpp"
#include "grandlab/weight.hpp"

namespace grandlab {

/// Grand-space index (p, theta), p > 1, theta > 0.
struct GrandExponent {
  double p;
  double theta;

  GrandExponent(double p_, double theta_) : p(p_), theta(theta_) {
    if (!(p > 1.0)) throw UsageError("grand exponent needs p > 1");
    if (!(theta > 0.0)) throw UsageError("grand exponent needs theta > 0");
  }
};

/// The increasing function phi with phi(0+) = 0 of an L^{p),phi} space.
class PhiSpec {
 public:
  enum class Kind { power, sobolev, sobolev_composed };

  static PhiSpec power(double theta) {
    if (!(theta > 0.0)) throw UsageError("phi power:theta needs theta > 0");
    return PhiSpec(Kind::power, theta, std::nullopt);
  }
  static PhiSpec sobolev(const SobolevPair& pair) { return PhiSpec(Kind::sobolev, 1.0, pair); }
  /// psi(x) = phi(x^theta)
  static PhiSpec sobolev_composed(const SobolevPair& pair, double theta) {
    if (!(theta > 0.0)) throw UsageError("phi sobolev-composed:theta needs theta > 0");
    return PhiSpec(Kind::sobolev_composed, theta, pair);
  }

  /// `power:theta` | `sobolev` | `sobolev-composed:theta`; the Sobolev kinds need `pair`.
  static PhiSpec parse(std::string_view s, const std::optional<SobolevPair>& pair) {
    auto need_pair = [&]() -> const SobolevPair& {
      if (!pair) throw UsageError("phi '" + std::string(s) + "' needs --p and --alpha");
      return *pair;
    };
    if (s == "sobolev") return sobolev(need_pair());
    if (s.starts_with("power:")) return power(detail::parse_number(s.substr(6)));
    if (s.starts_with("sobolev-composed:")) {
      return sobolev_composed(need_pair(), detail::parse_number(s.substr(17)));
    }
    throw UsageError("unknown phi '" + std::string(s) + "'");
  }

  Kind kind() const { return kind_; }
  double theta() const { return theta_; }

  std::string term() const {
    switch (kind_) {
      case Kind::power: return "power:" + detail::format_number(theta_);
      case Kind::sobolev: return "sobolev";
      case Kind::sobolev_composed: return "sobolev-composed:" + detail::format_number(theta_);
    }
    return {};
  }

  double operator()(double x) const {
    switch (kind_) {
      case Kind::power: return std::pow(x, theta_);
      case Kind::sobolev: return phi_alpha(x, *pair_);
      case Kind::sobolev_composed: return phi_alpha(std::pow(x, theta_), *pair_);
    }
    return 0.0;
  }

  /// Positivity and monotonicity on 64 points of (0, p-1], and decay toward 0
  /// along eps = 10^-1 ... 10^-12.
  void validate(double p) const {
    double prev = 0.0;
    for (int i = 1; i <= 64; ++i) {
      const double x = (p - 1.0) * i / 64.0;
      const double v = (*this)(x);
      if (!(v > 0.0) || !(v > prev)) {
        throw DomainError("phi '" + term() + "' is not positive increasing on (0, p-1]");
      }
      prev = v;
    }
    double last = (*this)(0.1);
    for (int k = 2; k <= 12; ++k) {
      const double v = (*this)(std::pow(10.0, -k));
      if (!(v < last)) throw DomainError("phi '" + term() + "' does not decay toward 0");
      last = v;
    }
  }

 private:
  PhiSpec(Kind kind, double theta, std::optional<SobolevPair> pair)
      : kind_(kind), theta_(theta), pair_(pair) {}

  Kind kind_;
  double theta_;
  std::optional<SobolevPair> pair_;
};

/// Where the supremum over eps was attained.
struct EpsSearchResult {
  double eps_star = 0.0;
  double value = 0.0;
  bool boundary_attained = false;  // winner was the last grid point, eps = p-1
  bool divergent = false;          // some probe exceeded the divergence threshold
  double tail_value = 0.0;         // objective at eps_min
};

struct EpsSearchOptions {
  int grid_points = 256;
  double eps_min = 1e-8;
  double divergence_threshold = 1e12;
};

/**
 * sup of objective over (eps_min, p-1]: log-spaced probe grid, then golden
 * section in the cell bracketing the best probe. Probes above the divergence
 * threshold return `divergent` with value +inf.
 */
template <class Objective>
EpsSearchResult sup_epsilon(Objective&& objective, double p, const EpsSearchOptions& opt = {}) {
  if (!(p > 1.0)) throw UsageError("sup_epsilon: need p > 1");
  const double hi = p - 1.0;
  const int n = opt.grid_points;
  std::vector<double> grid(n);
  const double lmin = std::log(opt.eps_min);
  const double lmax = std::log(hi);
  for (int i = 0; i < n; ++i) grid[i] = std::exp(lmin + (lmax - lmin) * i / (n - 1));
  grid.back() = hi;

  EpsSearchResult out;
  auto probe = [&](double e) {
    const double v = objective(e);
    if (std::isnan(v)) throw DomainError("objective is NaN at eps=" + std::to_string(e));
    return v;
  };
  std::vector<double> vals(n);
  int best = 0;
  for (int i = 0; i < n; ++i) {
    vals[i] = probe(grid[i]);
    if (vals[i] > opt.divergence_threshold) {
      out.eps_star = grid[i];
      out.value = std::numeric_limits<double>::infinity();
      out.divergent = true;
      out.tail_value = vals[0];
      return out;
    }
    if (vals[i] > vals[best]) best = i;
  }
  out.tail_value = vals[0];
  out.eps_star = grid[best];
  out.value = vals[best];
  out.boundary_attained = best == n - 1;

  // Golden section on the bracketing cell.
  double a = grid[std::max(best - 1, 0)];
  double b = grid[std::min(best + 1, n - 1)];
  constexpr double invphi = 0.6180339887498949;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = probe(c);
  double fd = probe(d);
  for (int it = 0; it < 100 && (b - a) > 1e-13 * b; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = probe(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = probe(d);
    }
  }
  for (auto [e, v] : {std::pair{c, fc}, std::pair{d, fd}}) {
    if (v > out.value) {
      out.value = v;
      out.eps_star = e;
    }
  }
  return out;
}

/// sup over eps of (phi(eps) ∫_J |f|^{p-eps} w)^{1/(p-eps)}.
inline EpsSearchResult localized_grand_norm(const Func01& f, double p, const PhiSpec& phi,
                                            const Weight& w, const Interval& J,
                                            double tol = 1e-9) {
  if (!(p > 1.0)) throw UsageError("grand norm needs p > 1");
  phi.validate(p);
  auto objective = [&](double e) {
    const auto I = lebesgue_integral(f, p - e, w, J, tol);
    if (I.divergent) return std::numeric_limits<double>::infinity();
    if (I.value <= 0.0) return 0.0;
    return std::exp((std::log(phi(e)) + std::log(I.value)) / (p - e));
  };
  return sup_epsilon(objective, p);
}

inline EpsSearchResult phi_grand_norm(const Func01& f, double p, const PhiSpec& phi,
                                      const Weight& w = Weight::one(), double tol = 1e-9) {
  return localized_grand_norm(f, p, phi, w, Interval::unit(), tol);
}

/// ‖f‖ in L^{p),theta}_w([0,1]).
inline EpsSearchResult grand_norm(const Func01& f, const GrandExponent& gx,
                                  const Weight& w = Weight::one(), double tol = 1e-9) {
  return phi_grand_norm(f, gx.p, PhiSpec::power(gx.theta), w, tol);
}

}  // namespace grandlab
