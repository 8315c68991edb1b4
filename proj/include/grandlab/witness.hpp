#pragma once

/**
 * @file witness.hpp
 * @brief Witness-family experiments for potential operators between grand
 *        Lebesgue spaces.
 *
 * A bounded operator T: L^{p),theta1} -> L^{q),theta2} must keep
 *
 *   lower(T chi_src on tgt) * ‖chi_tgt‖_{q),theta2} / ‖chi_src‖_{p),theta1}
 *
 * bounded over every witness pair (src, tgt). blowup_sweep tabulates this
 * ratio along shrinking indicator witnesses using the closed-form indicator
 * norms, fits its growth against ln(eps_J) and classifies the trend.
 * sobolev_ratio evaluates the one-weight inequality for K_alpha f = I_alpha(f w^alpha)
 * on arbitrary f by sampling K_alpha f on a graded mesh.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "grandlab/errors.hpp"
#include "grandlab/exponents.hpp"
#include "grandlab/func01.hpp"
#include "grandlab/grand_norm.hpp"
#include "grandlab/lebesgue.hpp"
#include "grandlab/potentials.hpp"
#include "grandlab/sobolev_pair.hpp"
#include "grandlab/weight.hpp"

namespace grandlab {

enum class OperatorTag { riesz, maximal, left, right };

inline std::string to_string(OperatorTag op) {
  switch (op) {
    case OperatorTag::riesz: return "riesz";
    case OperatorTag::maximal: return "maximal";
    case OperatorTag::left: return "left";
    case OperatorTag::right: return "right";
  }
  return {};
}

inline OperatorTag parse_operator(std::string_view s) {
  if (s == "riesz") return OperatorTag::riesz;
  if (s == "maximal") return OperatorTag::maximal;
  if (s == "left") return OperatorTag::left;
  if (s == "right") return OperatorTag::right;
  throw UsageError("unknown operator '" + std::string(s) + "' (riesz|maximal|left|right)");
}

struct BlowupPoint {
  int k = 0;
  double logJ = 0.0;  // ln |source interval|
  double eps_J = 0.0;
  double eta_J = 0.0;
  double norm_p = 0.0;  // ‖chi_src‖_{p),theta1}
  double norm_q = 0.0;  // ‖chi_tgt‖_{q),theta2}
  double ratio = 0.0;
  double dfactor = 0.0;

  double absJ() const { return std::exp(logJ); }
};

struct SweepReport {
  OperatorTag op = OperatorTag::riesz;
  SobolevPair pair{2.0, 0.25};
  double theta1 = 1.0;
  double theta2 = 1.0;
  std::vector<BlowupPoint> points;
  double slope = 0.0;            // least-squares d ln(ratio) / d ln(eps_J)
  double predicted_slope = 0.0;  // (theta2 - theta1)/p - alpha theta2
  bool diverging = false;

  std::string verdict() const { return diverging ? "diverging" : "bounded"; }
};

/// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

/// Diverging iff the ratios increase strictly and grow by more than 20% overall.
inline bool classify_diverging(const std::vector<BlowupPoint>& pts) {
  if (pts.size() < 2) return false;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!(pts[i].ratio > pts[i - 1].ratio)) return false;
  }
  return pts.back().ratio / pts.front().ratio > 1.2;
}

/**
 * Witness geometry per operator, for k in `ks`:
 *  - riesz, maximal: src = tgt = J with |J| = e^-k; T chi_J >= |J|^alpha on J.
 *  - left: n = 2^k, src = (0, 1/2n), tgt = (1/2n, 1/n); lower bound
 *    inf_tgt R chi_src = R chi_src(1/n).
 *  - right: n = 2^k, src = (1 - 1/2n, 1 - 1/3n), tgt = (1 - 1/n, 1 - 1/2n);
 *    lower bound W chi_src(1 - 1/n).
 * The one-sided kernels are dilation invariant, T chi_src,n(x_n) = n^-alpha T chi_src,1(x_1),
 * so the n = 1 value is computed once by the operator itself and rescaled.
 */
inline SweepReport blowup_sweep(OperatorTag op, const SobolevPair& pair, double theta1,
                                double theta2, const std::vector<int>& ks) {
  if (!(theta1 > 0.0 && theta2 > 0.0)) throw UsageError("blowup_sweep needs theta1, theta2 > 0");
  if (ks.size() < 2) throw UsageError("blowup_sweep needs at least two k values");
  for (std::size_t i = 1; i < ks.size(); ++i) {
    if (ks[i] <= ks[i - 1]) throw UsageError("blowup_sweep needs increasing k values");
  }
  if (ks.front() < 1) throw UsageError("blowup_sweep needs k >= 1");

  const double p = pair.p();
  const double q = pair.q();
  const double a = pair.alpha();
  const double ln2 = std::numbers::ln2;

  double unit_lower = 0.0;
  if (op == OperatorTag::left) unit_lower = riesz_left(Func01::indicator(0.0, 0.5), a, 1.0);
  if (op == OperatorTag::right) unit_lower = riesz_right(Func01::indicator(0.5, 2.0 / 3.0), a, 0.0);

  SweepReport rep;
  rep.op = op;
  rep.pair = pair;
  rep.theta1 = theta1;
  rep.theta2 = theta2;
  rep.predicted_slope = (theta2 - theta1) / p - a * theta2;

  std::vector<double> xs;
  std::vector<double> ys;
  for (int k : ks) {
    double log_src = 0.0;
    double log_tgt = 0.0;
    double log_lower = 0.0;
    switch (op) {
      case OperatorTag::riesz:
      case OperatorTag::maximal:
        log_src = log_tgt = -static_cast<double>(k);
        log_lower = a * log_src;
        break;
      case OperatorTag::left:
        log_src = log_tgt = -(k + 1) * ln2;
        log_lower = -a * k * ln2 + std::log(unit_lower);
        break;
      case OperatorTag::right:
        log_src = -k * ln2 - std::log(6.0);
        log_tgt = -(k + 1) * ln2;
        log_lower = -a * k * ln2 + std::log(unit_lower);
        break;
    }
    BlowupPoint pt;
    pt.k = k;
    pt.logJ = log_src;
    pt.eps_J = epsilon_J_log(p, theta1, log_src);
    pt.eta_J = eta_J(pair, pt.eps_J);
    pt.norm_p = chi_grand_norm_log(p, theta1, log_src);
    pt.norm_q = chi_grand_norm_log(q, theta2, log_tgt);
    pt.ratio = std::exp(log_lower + std::log(pt.norm_q) - std::log(pt.norm_p));
    pt.dfactor = divergence_factor(pair, theta1, theta2, pt.eps_J);
    rep.points.push_back(pt);
    xs.push_back(std::log(pt.eps_J));
    ys.push_back(std::log(pt.ratio));
  }
  rep.slope = fit_slope(xs, ys);
  rep.diverging = classify_diverging(rep.points);
  return rep;
}

/// {kmin, kmin + step, ..., <= kmax}
inline std::vector<int> k_range(int kmin, int kmax, int step = 1) {
  if (step < 1 || kmax < kmin) throw UsageError("invalid k range");
  std::vector<int> ks;
  for (int k = kmin; k <= kmax; k += step) ks.push_back(k);
  return ks;
}

/**
 * Samples g(x) = I_alpha(f w^alpha)(x) on a graded mesh of about `mesh_n`
 * nodes and returns the piecewise-linear interpolant as a Func01.
 *
 * The mesh is geometric (ratio 1/2, down to 2^-39) around 0, 1 and every
 * breakpoint or singular point of f w^alpha, filled with uniform nodes. Where
 * f w^alpha has exponent s at c with s + alpha < 0, g ~ |x - c|^{s+alpha}: this
 * exponent is declared on the interpolant and used to extrapolate into the
 * cell touching c.
 */
inline Func01 sample_kalpha(const Func01& f, const Weight& w, const SobolevPair& pair,
                            double tol = 1e-9, int mesh_n = 2048) {
  const double a = pair.alpha();
  const Func01 g = f * w.pow(a);
  if (!g.locally_integrable()) throw DivergentIntegral("f w^alpha is not integrable");

  std::vector<double> special = {0.0, 1.0};
  for (double b : g.breakpoints()) special.push_back(b);
  for (const auto& s : g.singularities()) special.push_back(s.at);
  std::sort(special.begin(), special.end());
  special.erase(std::unique(special.begin(), special.end()), special.end());

  std::vector<double> nodes = special;
  for (double c : special) {
    for (int j = 5; j <= 39; ++j) {
      const double d = std::ldexp(1.0, -j);
      if (c - d > 0.0) nodes.push_back(c - d);
      if (c + d < 1.0) nodes.push_back(c + d);
    }
  }
  const int uniform = std::max(64, mesh_n - static_cast<int>(nodes.size()));
  for (int i = 1; i < uniform; ++i) nodes.push_back(double(i) / uniform);
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

  std::vector<Singularity> sings;
  for (double c : special) {
    const double e = g.exponent_at(c) + a;
    if (e < 0.0) sings.push_back({c, e});
  }

  std::vector<double> values(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double v = riesz(g, a, nodes[i], tol);
    values[i] = std::isfinite(v) ? v : std::numeric_limits<double>::quiet_NaN();
  }

  // Nearest special point of each node, for power-law interpolation in the
  // geometric zones.
  std::vector<double> anchor(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    // special holds 0 and 1, so lower_bound never runs off either end.
    auto it = std::lower_bound(special.begin(), special.end(), nodes[i]);
    double best = *it;
    if (it != special.begin() && nodes[i] - *std::prev(it) < best - nodes[i]) best = *std::prev(it);
    anchor[i] = best;
  }

  auto exponent_at = [sings](double c) {
    for (const auto& s : sings) {
      if (s.at == c) return s.exponent;
    }
    return 0.0;
  };
  constexpr double zone = 1.0 / 32.0;
  auto eval = [nodes, values, anchor, exponent_at](double t) {
    auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
    std::size_t j = static_cast<std::size_t>(it - nodes.begin());
    if (j == 0) j = 1;
    if (j >= nodes.size()) j = nodes.size() - 1;
    const std::size_t i = j - 1;
    const double t0 = nodes[i];
    const double t1 = nodes[j];
    const double v0 = values[i];
    const double v1 = values[j];
    if (std::isnan(v0) && std::isnan(v1)) return std::numeric_limits<double>::quiet_NaN();
    if (std::isnan(v0)) return v1 * std::pow((t - t0) / (t1 - t0), exponent_at(t0));
    if (std::isnan(v1)) return v0 * std::pow((t1 - t) / (t1 - t0), exponent_at(t1));
    // v ~ |t - c|^g between two nodes on the same side of their anchor c.
    const double c = anchor[i];
    if (anchor[j] == c && v0 > 0.0 && v1 > 0.0) {
      const double d0 = std::abs(t0 - c);
      const double d1 = std::abs(t1 - c);
      if (d0 > 0.0 && d1 > 0.0 && std::max(d0, d1) <= zone && (t0 - c) * (t1 - c) > 0.0) {
        const double g = std::log(v1 / v0) / std::log(d1 / d0);
        return v0 * std::pow(std::abs(t - c) / d0, g);
      }
    }
    const double s = (t - t0) / (t1 - t0);
    return v0 + s * (v1 - v0);
  };
  return Func01(eval, std::move(sings), nodes,
                "sampled:kalpha(" + f.term() + ";" + w.term() + ")");
}

struct SobolevRatioReport {
  double ratio = 0.0;  // +inf when the numerator diverges, NaN when undefined
  EpsSearchResult numerator;
  EpsSearchResult denominator;
};

/**
 * ‖I_alpha(f w^alpha)‖_{L^{q),theta(1+alpha q)}_w} / ‖f‖_{L^{p),theta}_w}.
 */
inline SobolevRatioReport sobolev_ratio(const Func01& f, const Weight& w, const SobolevPair& pair,
                                        double theta, double tol = 1e-9, int mesh_n = 2048) {
  if (!(theta > 0.0)) throw UsageError("sobolev_ratio needs theta > 0");
  SobolevRatioReport rep;
  rep.denominator = grand_norm(f, GrandExponent(pair.p(), theta), w, tol);
  try {
    const Func01 kf = sample_kalpha(f, w, pair, tol, mesh_n);
    rep.numerator = grand_norm(kf, GrandExponent(pair.q(), theta * pair.threshold_factor()), w, tol);
  } catch (const DivergentIntegral&) {
    // K_alpha f is infinite on a set of positive measure.
    rep.numerator.divergent = true;
    rep.numerator.value = std::numeric_limits<double>::infinity();
  }
  if (rep.denominator.divergent || !(rep.denominator.value > 0.0)) {
    rep.ratio = std::numeric_limits<double>::quiet_NaN();
  } else if (rep.numerator.divergent) {
    rep.ratio = std::numeric_limits<double>::infinity();
  } else {
    rep.ratio = rep.numerator.value / rep.denominator.value;
  }
  return rep;
}

/// The twelve test functions probed for the one-weight inequality: shrinking
/// indicators, t^{-1/2} and constants.
inline std::vector<Func01> sobolev_test_family() {
  std::vector<Func01> fam;
  for (int k : {1, 2, 4, 6, 8, 10}) fam.push_back(Func01::indicator(0.0, std::ldexp(1.0, -k)));
  for (int k : {3, 6}) fam.push_back(Func01::indicator(0.5, 0.5 + std::ldexp(1.0, -k)));
  fam.push_back(Func01::indicator(1.0 - std::ldexp(1.0, -6), 1.0));
  fam.push_back(Func01::power(-0.5));
  fam.push_back(Func01::one());
  fam.push_back(Func01::constant(2.0));
  return fam;
}

struct Remark51Report {
  double grand_norm_f = 0.0;  // ‖t^{-1/p}‖_{p),1}, equal to p
  double eps_star = 0.0;
  bool lp_divergent = false;  // ‖t^{-1/p}‖_{L^p} = inf
  std::vector<double> sample_t;
  std::vector<double> sample_scaled;  // I_alpha f(t) * t^{1/q}
  double c1 = 0.0;
  double c2 = 0.0;
  double potential_grand_norm = 0.0;  // ‖I_alpha f‖_{q),1}
  bool potential_grand_finite = false;
  bool lq_divergent = false;  // ‖I_alpha f‖_{L^q} = inf
};

/**
 * f(t) = t^{-1/p} lies in L^{p)} \ L^p, and I_alpha f ≈ t^{-1/q} lies in
 * L^{q)} \ L^q. Checks the four memberships and reports the envelope
 * c1 t^{-1/q} <= I_alpha f(t) <= c2 t^{-1/q} on sample points.
 */
inline Remark51Report remark51_check(const SobolevPair& pair, double tol = 1e-9) {
  const double p = pair.p();
  const double q = pair.q();
  const double a = pair.alpha();
  const Func01 f = Func01::power(-1.0 / p);

  Remark51Report rep;
  const auto gn = grand_norm(f, GrandExponent(p, 1.0), Weight::one(), tol);
  rep.grand_norm_f = gn.value;
  rep.eps_star = gn.eps_star;
  rep.lp_divergent = std::isinf(lebesgue_norm(f, p, Weight::one(), tol));

  rep.sample_t = {1e-4, 3e-4, 1e-3, 3e-3, 1e-2, 3e-2, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9};
  rep.c1 = std::numeric_limits<double>::infinity();
  rep.c2 = 0.0;
  for (double t : rep.sample_t) {
    const double v = riesz(f, a, t, tol) * std::pow(t, 1.0 / q);
    rep.sample_scaled.push_back(v);
    rep.c1 = std::min(rep.c1, v);
    rep.c2 = std::max(rep.c2, v);
  }

  const Func01 tf = sample_kalpha(f, Weight::one(), pair, tol);
  const auto tn = grand_norm(tf, GrandExponent(q, 1.0), Weight::one(), tol);
  rep.potential_grand_norm = tn.value;
  rep.potential_grand_finite = !tn.divergent && std::isfinite(tn.value);
  rep.lq_divergent = std::isinf(lebesgue_norm(tf, q, Weight::one(), tol));
  return rep;
}

}  // namespace grandlab
