#pragma once

// Real functions on [0,1] with declared singularity metadata, and the text
// DSL used by the CLI and config files:
//
//   one | indicator:a,b | power:s | rpower:s | scale:c,(term) | sum:(term),(term)

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "grandlab/errors.hpp"
#include "grandlab/interval.hpp"
#include "grandlab/quadrature.hpp"

namespace grandlab {

/// Constant `value` on [a, b]; zero elsewhere.
struct Piece {
  double a;
  double b;
  double value;
};

namespace detail {

inline std::string format_number(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

inline double parse_number(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw UsageError("not a number: '" + std::string(s) + "'");
  }
  return v;
}

/// Splits at commas outside parentheses; strips one level of enclosing parens.
inline std::vector<std::string_view> split_args(std::string_view args) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= args.size(); ++i) {
    if (i == args.size() || (args[i] == ',' && depth == 0)) {
      out.push_back(args.substr(start, i - start));
      start = i + 1;
    } else if (args[i] == '(') {
      ++depth;
    } else if (args[i] == ')') {
      if (--depth < 0) throw UsageError("unbalanced ')' in term");
    }
  }
  if (depth != 0) throw UsageError("unbalanced '(' in term");
  for (auto& a : out) {
    if (a.size() >= 2 && a.front() == '(' && a.back() == ')') a = a.substr(1, a.size() - 2);
  }
  return out;
}

/// Disjoint, sorted segments; overlapping input pieces are summed.
inline std::vector<Piece> normalize(const std::vector<Piece>& in) {
  std::vector<double> cuts;
  for (const auto& p : in) {
    cuts.push_back(p.a);
    cuts.push_back(p.b);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<Piece> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    double v = 0.0;
    for (const auto& p : in) {
      if (p.a <= lo && hi <= p.b) v += p.value;
    }
    if (v == 0.0) continue;
    if (!out.empty() && out.back().b == lo && out.back().value == v) {
      out.back().b = hi;
    } else {
      out.push_back({lo, hi, v});
    }
  }
  return out;
}

inline std::vector<Singularity> combine(const std::vector<Singularity>& x,
                                        const std::vector<Singularity>& y, bool product) {
  std::vector<Singularity> out = x;
  for (const auto& s : y) {
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& o) { return o.at == s.at; });
    if (it == out.end()) {
      out.push_back(product ? s : Singularity{s.at, std::min(s.exponent, 0.0)});
    } else {
      it->exponent = product ? it->exponent + s.exponent : std::min(it->exponent, s.exponent);
    }
  }
  if (!product) {
    for (auto& o : out) {
      const bool in_y = std::any_of(y.begin(), y.end(), [&](const auto& s) { return s.at == o.at; });
      if (!in_y) o.exponent = std::min(o.exponent, 0.0);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& u, const auto& v) { return u.at < v.at; });
  return out;
}

inline std::vector<double> merge_breaks(std::vector<double> x, const std::vector<double>& y) {
  x.insert(x.end(), y.begin(), y.end());
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  return x;
}

}  // namespace detail

/**
 * A real function on [0,1] together with the metadata quadrature needs:
 * the power exponent at each singular point (f ~ |t - c|^s) and the jump
 * points. Piecewise-constant functions also carry their exact segment list,
 * which lets kernel integrals and norms bypass quadrature entirely.
 *
 * Exponents combine as: sum -> min (a regular summand counts as 0),
 * product -> sum, |f|^r -> r * s.
 */
class Func01 {
 public:
  using Eval = std::function<double(double)>;

  Func01(Eval eval, std::vector<Singularity> singularities, std::vector<double> breakpoints,
         std::string term, std::optional<std::vector<Piece>> pieces = std::nullopt)
      : eval_(std::make_shared<Eval>(std::move(eval))),
        sings_(std::move(singularities)),
        breaks_(std::move(breakpoints)),
        term_(std::move(term)),
        pieces_(std::move(pieces)) {
    std::sort(sings_.begin(), sings_.end(), [](const auto& u, const auto& v) { return u.at < v.at; });
  }

  static Func01 constant(double c) {
    std::vector<Piece> pcs;
    if (c != 0.0) pcs.push_back({0.0, 1.0, c});
    return {[c](double) { return c; }, {}, {},
            c == 1.0 ? "one" : "scale:" + detail::format_number(c) + ",(one)", std::move(pcs)};
  }

  static Func01 one() { return constant(1.0); }

  static Func01 indicator(double a, double b) {
    if (!(0.0 <= a && a < b && b <= 1.0)) {
      throw UsageError("indicator needs 0 <= a < b <= 1");
    }
    std::vector<double> br;
    if (a > 0.0) br.push_back(a);
    if (b < 1.0) br.push_back(b);
    return {[a, b](double t) { return (a <= t && t <= b) ? 1.0 : 0.0; }, {}, std::move(br),
            "indicator:" + detail::format_number(a) + "," + detail::format_number(b),
            std::vector<Piece>{{a, b, 1.0}}};
  }

  /// t ↦ t^s
  static Func01 power(double s) {
    if (s == 0.0) return one();
    return {[s](double t) { return std::pow(t, s); }, {{0.0, s}}, {},
            "power:" + detail::format_number(s)};
  }

  /// t ↦ (1 - t)^s
  static Func01 rpower(double s) {
    if (s == 0.0) return one();
    return {[s](double t) { return std::pow(1.0 - t, s); }, {{1.0, s}}, {},
            "rpower:" + detail::format_number(s)};
  }

  static Func01 parse(std::string_view term) {
    while (!term.empty() && term.front() == ' ') term.remove_prefix(1);
    while (!term.empty() && term.back() == ' ') term.remove_suffix(1);
    if (term.size() >= 2 && term.front() == '(' && term.back() == ')') {
      return parse(term.substr(1, term.size() - 2));
    }
    if (term == "one") return one();
    const auto colon = term.find(':');
    if (colon == std::string_view::npos) {
      throw UsageError("unknown function term '" + std::string(term) + "'");
    }
    const auto head = term.substr(0, colon);
    const auto args = detail::split_args(term.substr(colon + 1));
    auto want = [&](std::size_t n) {
      if (args.size() != n) {
        throw UsageError("'" + std::string(head) + "' takes " + std::to_string(n) + " argument(s)");
      }
    };
    if (head == "indicator") {
      want(2);
      return indicator(detail::parse_number(args[0]), detail::parse_number(args[1]));
    }
    if (head == "power") {
      want(1);
      return power(detail::parse_number(args[0]));
    }
    if (head == "rpower") {
      want(1);
      return rpower(detail::parse_number(args[0]));
    }
    if (head == "scale") {
      want(2);
      return parse(args[1]).scaled(detail::parse_number(args[0]));
    }
    if (head == "sum") {
      want(2);
      return parse(args[0]) + parse(args[1]);
    }
    throw UsageError("unknown function term '" + std::string(head) + "'");
  }

  double operator()(double t) const { return (*eval_)(t); }

  const std::string& term() const { return term_; }
  const std::vector<Singularity>& singularities() const { return sings_; }
  const std::vector<double>& breakpoints() const { return breaks_; }

  double exponent_at(double loc) const {
    for (const auto& s : sings_) {
      if (s.at == loc) return s.exponent;
    }
    return 0.0;
  }
  double sing0() const { return exponent_at(0.0); }
  double sing1() const { return exponent_at(1.0); }
  std::vector<Singularity> interior_singularities() const {
    std::vector<Singularity> out;
    for (const auto& s : sings_) {
      if (s.at > 0.0 && s.at < 1.0) out.push_back(s);
    }
    return out;
  }

  bool is_piecewise_constant() const { return pieces_.has_value(); }
  const std::vector<Piece>& pieces() const { return *pieces_; }

  /// Every declared exponent > -1, i.e. f is integrable near its singular points.
  bool locally_integrable() const {
    return std::all_of(sings_.begin(), sings_.end(),
                       [](const auto& s) { return is_integrable_exponent(s.exponent); });
  }

  Func01 scaled(double c) const {
    auto e = eval_;
    std::optional<std::vector<Piece>> pcs;
    if (pieces_) {
      pcs = std::vector<Piece>{};
      if (c != 0.0) {
        for (auto p : *pieces_) {
          p.value *= c;
          pcs->push_back(p);
        }
      }
    }
    return {[e, c](double t) { return c * (*e)(t); }, sings_, breaks_,
            "scale:" + detail::format_number(c) + ",(" + term_ + ")", std::move(pcs)};
  }

  /// |f|^r for r > 0.
  Func01 abs_pow(double r) const {
    if (!(r > 0.0)) throw DomainError("abs_pow needs r > 0");
    auto e = eval_;
    auto sings = sings_;
    for (auto& s : sings) s.exponent *= r;
    std::optional<std::vector<Piece>> pcs;
    if (pieces_) {
      pcs = std::vector<Piece>{};
      for (auto p : *pieces_) {
        p.value = std::pow(std::abs(p.value), r);
        pcs->push_back(p);
      }
    }
    return {[e, r](double t) { return std::pow(std::abs((*e)(t)), r); }, std::move(sings), breaks_,
            "abspow:" + detail::format_number(r) + ",(" + term_ + ")", std::move(pcs)};
  }

  friend Func01 operator+(const Func01& f, const Func01& g) {
    auto ef = f.eval_;
    auto eg = g.eval_;
    std::optional<std::vector<Piece>> pcs;
    if (f.pieces_ && g.pieces_) {
      auto all = *f.pieces_;
      all.insert(all.end(), g.pieces_->begin(), g.pieces_->end());
      pcs = detail::normalize(all);
    }
    return {[ef, eg](double t) { return (*ef)(t) + (*eg)(t); },
            detail::combine(f.sings_, g.sings_, false), detail::merge_breaks(f.breaks_, g.breaks_),
            "sum:(" + f.term_ + "),(" + g.term_ + ")", std::move(pcs)};
  }

  friend Func01 operator*(const Func01& f, const Func01& g) {
    auto ef = f.eval_;
    auto eg = g.eval_;
    std::optional<std::vector<Piece>> pcs;
    if (f.pieces_ && g.pieces_) {
      std::vector<Piece> all;
      for (const auto& u : *f.pieces_) {
        for (const auto& v : *g.pieces_) {
          const double lo = std::max(u.a, v.a);
          const double hi = std::min(u.b, v.b);
          if (lo < hi) all.push_back({lo, hi, u.value * v.value});
        }
      }
      pcs = detail::normalize(all);
    }
    return {[ef, eg](double t) {
              const double x = (*ef)(t);
              return x == 0.0 ? 0.0 : x * (*eg)(t);
            },
            detail::combine(f.sings_, g.sings_, true), detail::merge_breaks(f.breaks_, g.breaks_),
            "mul:(" + f.term_ + "),(" + g.term_ + ")", std::move(pcs)};
  }

  /// ∫_J f, exact for piecewise-constant functions.
  QuadResult integrate(const Interval& J, const QuadOptions& opt = {}) const {
    if (pieces_) {
      double v = 0.0;
      for (const auto& p : *pieces_) {
        const double lo = std::max(p.a, J.a());
        const double hi = std::min(p.b, J.b());
        if (lo < hi) v += p.value * (hi - lo);
      }
      return {v, 0.0, 0, false, true};
    }
    return grandlab::integrate(*this, J, sings_, breaks_, opt);
  }

 private:
  std::shared_ptr<const Eval> eval_;
  std::vector<Singularity> sings_;
  std::vector<double> breaks_;
  std::string term_;
  std::optional<std::vector<Piece>> pieces_;
};

}  // namespace grandlab
