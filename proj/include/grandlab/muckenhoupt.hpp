#pragma once

/**
 * @file muckenhoupt.hpp
 * @brief Muckenhoupt-type constants of weights on [0,1].
 *
 *   A_r(w) = sup_J (avg_J w)^{1/r} (avg_J w^{1-r'})^{1/r'}
 *
 * This is the r-th root of the more common (avg w)(avg w^{1-r'})^{r-1}.
 * The Sobolev condition w ∈ A_{1+q/p'} is searched in the form
 *
 *   sup_J (avg_J w)^{1/q} (avg_J w^{-p'/q})^{1/p'},
 *
 * which equals A_{1+q/p'}(w)^{(p'+q)/(p'q)}.
 *
 * The search covers all intervals with endpoints on a uniform grid plus the
 * pinned families [0, 2^-k] and [1 - 2^-k, 1], k = 1..40, where power-weight
 * degeneracy lives.
 */

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "grandlab/errors.hpp"
#include "grandlab/interval.hpp"
#include "grandlab/sobolev_pair.hpp"
#include "grandlab/weight.hpp"

namespace grandlab {

inline constexpr double kApDivergenceThreshold = 1e10;
inline constexpr int kPinnedDepth = 40;

/// Value of the averaged product on [0, 2^-k] (left) and [1 - 2^-k, 1] (right).
struct PinnedProbe {
  int k;
  double left;
  double right;
};

struct ApReport {
  double r = 0.0;
  double constant_estimate = 0.0;  // +inf when divergent
  bool divergent = false;
  Interval argmax_interval = Interval::unit();
  int grid_n = 0;
  std::vector<PinnedProbe> pinned;
};

namespace detail {

// sup_J (avg_J w)^{a} (avg_J w^{t})^{b}
inline ApReport averaged_product_sup(const Weight& w, double a, double t, double b, double r_label,
                                     int grid_n, double tol) {
  if (grid_n < 64) throw UsageError("Muckenhoupt search needs grid_n >= 64");
  ApReport rep;
  rep.r = r_label;
  rep.grid_n = grid_n;
  constexpr double inf = std::numeric_limits<double>::infinity();

  if (w.kind() == Weight::Kind::one) {
    // Both averages are constants c and c^t, and a + b t = 0 for every caller.
    for (int k = 1; k <= kPinnedDepth; ++k) rep.pinned.push_back({k, 1.0, 1.0});
    rep.constant_estimate = 1.0;
    return rep;
  }

  auto value_on = [&](double w1, double wt, double len) {
    if (!std::isfinite(wt) || !std::isfinite(w1)) return inf;
    return std::exp(a * std::log(w1 / len) + b * std::log(wt / len));
  };

  double best = -inf;
  auto consider = [&](double v, double lo, double hi) {
    if (v > best) {
      best = v;
      rep.argmax_interval = Interval(lo, hi);
    }
  };

  for (int k = 1; k <= kPinnedDepth; ++k) {
    const double h = std::ldexp(1.0, -k);
    const Interval left(0.0, h);
    const Interval right(1.0 - h, 1.0);
    const double vl = value_on(w_measure(w, left, 1.0, tol), w_measure(w, left, t, tol), h);
    const double vr = value_on(w_measure(w, right, 1.0, tol), w_measure(w, right, t, tol), h);
    rep.pinned.push_back({k, vl, vr});
    consider(vl, left.a(), left.b());
    consider(vr, right.a(), right.b());
  }

  const int n = grid_n;
  std::vector<double> s1(n + 1, 0.0);
  std::vector<double> st(n + 1, 0.0);
  for (int i = 0; i < n; ++i) {
    const Interval cell(double(i) / n, double(i + 1) / n);
    s1[i + 1] = s1[i] + w_measure(w, cell, 1.0, tol);
    st[i + 1] = st[i] + w_measure(w, cell, t, tol);
  }
  if (!std::isfinite(st[n]) || !std::isfinite(s1[n])) {
    // w^t (or w) not integrable on some grid cell.
    for (int i = 0; i < n; ++i) {
      if (!std::isfinite(st[i + 1]) || !std::isfinite(s1[i + 1])) {
        consider(inf, double(i) / n, double(i + 1) / n);
        break;
      }
    }
  } else {
    // Maximize the logarithm; ln|J| depends only on j - i.
    std::vector<double> loglen(n + 1, 0.0);
    for (int m = 1; m <= n; ++m) loglen[m] = (a + b) * std::log(double(m) / n);
    double best_log = -inf;
    int bi = 0;
    int bj = n;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j <= n; ++j) {
        const double v = a * std::log(s1[j] - s1[i]) + b * std::log(st[j] - st[i]) - loglen[j - i];
        if (v > best_log) {
          best_log = v;
          bi = i;
          bj = j;
        }
      }
    }
    consider(std::exp(best_log), double(bi) / n, double(bj) / n);
  }

  rep.divergent = !(best <= kApDivergenceThreshold);
  rep.constant_estimate = rep.divergent ? inf : best;
  return rep;
}

}  // namespace detail

/// A_r(w) with the outer exponents 1/r and 1/r'.
inline ApReport ap_constant(const Weight& w, double r, int grid_n = 1024, double tol = 1e-9) {
  if (!(r > 1.0)) throw UsageError("ap_constant needs r > 1");
  const double rp = r / (r - 1.0);
  return detail::averaged_product_sup(w, 1.0 / r, 1.0 - rp, 1.0 / rp, r, grid_n, tol);
}

/// sup_J (avg_J w)^{1/q} (avg_J w^{-p'/q})^{1/p'}; r is reported as 1 + q/p'.
inline ApReport sobolev_ap_constant(const Weight& w, const SobolevPair& pair, int grid_n = 1024,
                                    double tol = 1e-9) {
  const double q = pair.q();
  const double pp = pair.pprime();
  return detail::averaged_product_sup(w, 1.0 / q, -pp / q, 1.0 / pp, 1.0 + q / pp, grid_n, tol);
}

/// x^gamma ∈ A_r([0,1]) iff -1 < gamma < r - 1.
inline bool power_weight_in_ap(double gamma, double r) {
  if (!(r > 1.0)) throw UsageError("power_weight_in_ap needs r > 1");
  return gamma > -1.0 && gamma < r - 1.0;
}

/// |J|^{alpha-1} w(J)^{1/q} (∫_J w^{-p'/q})^{1/p'}; +inf when w^{-p'/q} is not integrable on J.
inline double necessity_quantity(const Weight& w, const SobolevPair& pair, const Interval& J,
                                 double tol = 1e-9) {
  const double wj = w_measure(w, J, 1.0, tol);
  const double wneg = w_measure(w, J, -pair.pprime() / pair.q(), tol);
  if (!std::isfinite(wj) || !std::isfinite(wneg)) return std::numeric_limits<double>::infinity();
  return std::exp((pair.alpha() - 1.0) * std::log(J.length()) + std::log(wj) / pair.q() +
                  std::log(wneg) / pair.pprime());
}

}  // namespace grandlab
