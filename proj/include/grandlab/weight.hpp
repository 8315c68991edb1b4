#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "grandlab/errors.hpp"
#include "grandlab/func01.hpp"
#include "grandlab/interval.hpp"
#include "grandlab/quadrature.hpp"

namespace grandlab {

/**
 * A weight on [0,1]: an a.e. positive integrable function.
 *
 * DSL: `one` | `power:gamma` (x^gamma) | `twopower:gamma,delta`
 * (x^gamma (1-x)^delta) | `dsl:(term)` (any positive Func01 term).
 *
 * `one` and `power` integrate in closed form, ∫_J w^s included for every
 * real s; the other kinds go through graded quadrature with the exponents
 * gamma*s and delta*s declared at the endpoints.
 */
class Weight {
 public:
  enum class Kind { one, power, twopower, dsl };

  static Weight one() { return Weight(Kind::one, 0.0, 0.0, std::nullopt); }

  static Weight power(double gamma) {
    if (!(gamma > -1.0)) throw DomainError("power weight x^gamma needs gamma > -1");
    if (gamma == 0.0) return one();
    return Weight(Kind::power, gamma, 0.0, std::nullopt);
  }

  static Weight twopower(double gamma, double delta) {
    if (!(gamma > -1.0 && delta > -1.0)) {
      throw DomainError("weight x^gamma (1-x)^delta needs gamma, delta > -1");
    }
    return Weight(Kind::twopower, gamma, delta, std::nullopt);
  }

  static Weight from_func(Func01 f) {
    if (!f.locally_integrable()) throw DomainError("weight must be integrable");
    for (int i = 0; i < 64; ++i) {
      const double t = (i + 0.5) / 64.0;
      if (!(f(t) > 0.0)) throw DomainError("weight must be positive (sampled at t=" + std::to_string(t) + ")");
    }
    return Weight(Kind::dsl, 0.0, 0.0, std::move(f));
  }

  static Weight parse(std::string_view term) {
    while (!term.empty() && term.front() == ' ') term.remove_prefix(1);
    while (!term.empty() && term.back() == ' ') term.remove_suffix(1);
    if (term == "one") return one();
    const auto colon = term.find(':');
    if (colon == std::string_view::npos) throw UsageError("unknown weight '" + std::string(term) + "'");
    const auto head = term.substr(0, colon);
    const auto rest = term.substr(colon + 1);
    if (head == "dsl") {
      return from_func(Func01::parse(rest));
    }
    const auto args = detail::split_args(rest);
    if (head == "power" && args.size() == 1) return power(detail::parse_number(args[0]));
    if (head == "twopower" && args.size() == 2) {
      return twopower(detail::parse_number(args[0]), detail::parse_number(args[1]));
    }
    throw UsageError("unknown weight '" + std::string(term) + "'");
  }

  Kind kind() const { return kind_; }
  double gamma() const { return gamma_; }
  double delta() const { return delta_; }
  double scale() const { return scale_; }

  std::string term() const {
    std::string base;
    switch (kind_) {
      case Kind::one: base = "one"; break;
      case Kind::power: base = "power:" + detail::format_number(gamma_); break;
      case Kind::twopower:
        base = "twopower:" + detail::format_number(gamma_) + "," + detail::format_number(delta_);
        break;
      case Kind::dsl: base = "dsl:(" + func_->term() + ")"; break;
    }
    return scale_ == 1.0 ? base : detail::format_number(scale_) + "*" + base;
  }

  /// c * w for c > 0.
  Weight scaled(double c) const {
    if (!(c > 0.0)) throw DomainError("weight scale must be positive");
    Weight w = *this;
    w.scale_ *= c;
    return w;
  }

  double operator()(double x) const {
    switch (kind_) {
      case Kind::one: return scale_;
      case Kind::power: return scale_ * std::pow(x, gamma_);
      case Kind::twopower: return scale_ * std::pow(x, gamma_) * std::pow(1.0 - x, delta_);
      case Kind::dsl: return scale_ * (*func_)(x);
    }
    return 0.0;
  }

  /// w^s as a function with its singularity metadata.
  Func01 pow(double s) const {
    const double cs = std::pow(scale_, s);
    switch (kind_) {
      case Kind::one: return Func01::constant(cs);
      case Kind::power: return Func01::power(gamma_ * s).scaled(cs);
      case Kind::twopower: return (Func01::power(gamma_ * s) * Func01::rpower(delta_ * s)).scaled(cs);
      case Kind::dsl: {
        auto f = *func_;
        auto sings = f.singularities();
        for (auto& sg : sings) sg.exponent *= s;
        return Func01([f, s, cs](double x) { return cs * std::pow(f(x), s); }, std::move(sings),
                      f.breakpoints(), "pow:" + detail::format_number(s) + ",(" + f.term() + ")");
      }
    }
    return Func01::one();
  }

  /// Closed-form ∫_J w^s for `one` and `power`; nullopt for the other kinds.
  /// Returns +inf when w^s is not integrable at 0 ∈ J.
  std::optional<double> closed_form_measure(const Interval& J, double s) const {
    const double cs = std::pow(scale_, s);
    if (kind_ == Kind::one) return cs * J.length();
    if (kind_ != Kind::power) return std::nullopt;
    const double e = gamma_ * s;
    const double a = J.a();
    const double b = J.b();
    if (a == 0.0 && !is_integrable_exponent(e)) return std::numeric_limits<double>::infinity();
    if (std::abs(e + 1.0) < 1e-14) return cs * std::log(b / a);
    // (b^{e+1} - a^{e+1}) / (e+1), written to keep precision for short intervals.
    const double k = e + 1.0;
    if (a == 0.0) return cs * std::pow(b, k) / k;
    return cs * std::pow(b, k) * -std::expm1(k * std::log(a / b)) / k;
  }

 private:
  Weight(Kind kind, double gamma, double delta, std::optional<Func01> func)
      : kind_(kind), gamma_(gamma), delta_(delta), func_(std::move(func)) {}

  Kind kind_;
  double gamma_;
  double delta_;
  double scale_ = 1.0;
  std::optional<Func01> func_;
};

/// ∫_J w^s; +inf when w^s is not integrable on J.
inline double w_measure(const Weight& w, const Interval& J, double s, double tol = 1e-9) {
  if (auto v = w.closed_form_measure(J, s)) return *v;
  if (w.kind() == Weight::Kind::twopower && J.b() > 0.5) {
    // Near x = 1 the factor (1-x)^delta cannot be resolved in x, so the right
    // half is integrated after the substitution u = 1 - x (exact for x >= 1/2).
    const Weight mirror = Weight::twopower(w.delta(), w.gamma()).scaled(w.scale());
    const double mid = std::max(J.a(), 0.5);
    const double right = w_measure(mirror, Interval(1.0 - J.b(), 1.0 - mid), s, tol);
    if (J.a() >= 0.5) return right;
    return w_measure(w, Interval(J.a(), 0.5), s, tol) + right;
  }
  QuadOptions opt;
  opt.tol = tol;
  const auto r = w.pow(s).integrate(J, opt);
  return r.divergent ? std::numeric_limits<double>::infinity() : r.value;
}

}  // namespace grandlab
