#pragma once

/**
 * @file quadrature.hpp
 * @brief Adaptive Gauss-Kronrod quadrature with geometric grading toward
 *        declared power singularities.
 *
 * Every integral in the library is of the form
 *
 *     ∫_J g(t) dt,   g(t) ~ |t - c|^s  near each declared point c,  s > -1.
 *
 * Near a declared point c the panel is cut into cells whose distance to c
 * shrinks by the grading ratio σ at each level. On such a cell g is smooth
 * relative to its length, so a 15-point Kronrod rule is accurate; the cell
 * integrals of a pure power decay geometrically with ratio ρ = σ^{s+1}. Once
 * the next cell would be negligible (or the grading depth is exhausted) the
 * remaining tail is summed as a geometric series. A smooth factor or a regular
 * summand adds components with ratios ρσ and σ; these are fitted from the last
 * cells, and the misfit on one more cell is the tail's error estimate.
 *
 * All other cells go into a max-heap keyed on the Kronrod error estimate and
 * are bisected until the total estimate meets the tolerance.
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <limits>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "grandlab/errors.hpp"
#include "grandlab/interval.hpp"

namespace grandlab {

/// Declared power behavior g(t) ~ |t - at|^exponent near `at`.
struct Singularity {
  double at;
  double exponent;

  friend bool operator==(const Singularity&, const Singularity&) = default;
};

struct QuadResult {
  double value = 0.0;
  double abs_error_estimate = 0.0;
  int subdivisions = 0;
  bool divergent = false;
  bool converged = true;
};

struct QuadOptions {
  double tol = 1e-9;       // absolute
  double rel_tol = 1e-12;  // accepted when the absolute target is out of reach
  int max_subdivisions = 200000;
  double grading_ratio = 0.25;
  int max_grading_levels = 120;
  double divergence_threshold = 1e12;
  bool extrapolate_tail = true;
  bool strict = true;  // throw NonConvergent instead of returning converged=false
};

/// Exponents at or below this count as non-integrable (slack for roundoff in
/// derived exponents such as q * (-1/q)).
inline constexpr double kIntegrableExponentFloor = -1.0 + 1e-12;

inline bool is_integrable_exponent(double s) { return s > kIntegrableExponentFloor; }

namespace detail {

struct Cell {
  double a;
  double b;
  double value;
  double error;
};

struct ByError {
  bool operator()(const Cell& x, const Cell& y) const { return x.error < y.error; }
};

// QUADPACK qk15 abscissae and weights.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
Cell kronrod15(F& g, double a, double b) {
  constexpr double epmach = std::numeric_limits<double>::epsilon();
  constexpr double uflow = std::numeric_limits<double>::min();
  const double centr = 0.5 * (a + b);
  const double hlgth = 0.5 * (b - a);
  const double dhlgth = std::abs(hlgth);

  std::array<double, 7> fv1{};
  std::array<double, 7> fv2{};
  const double fc = g(centr);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  for (int j = 0; j < 3; ++j) {
    const int jtw = 2 * j + 1;
    const double absc = hlgth * kXgk[jtw];
    const double f1 = g(centr - absc);
    const double f2 = g(centr + absc);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    resg += kWg[j] * (f1 + f2);
    resk += kWgk[jtw] * (f1 + f2);
    resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
  }
  for (int j = 0; j < 4; ++j) {
    const int jtwm1 = 2 * j;
    const double absc = hlgth * kXgk[jtwm1];
    const double f1 = g(centr - absc);
    const double f2 = g(centr + absc);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    resk += kWgk[jtwm1] * (f1 + f2);
    resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
  }
  const double reskh = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  }
  const double result = resk * hlgth;
  resabs *= dhlgth;
  resasc *= dhlgth;
  double abserr = std::abs((resk - resg) * hlgth);
  if (resasc != 0.0 && abserr != 0.0) {
    abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
  }
  if (resabs > uflow / (50.0 * epmach)) {
    abserr = std::max(epmach * 50.0 * resabs, abserr);
  }
  return {a, b, result, abserr};
}

struct SpecialPoint {
  double at;
  bool graded;
  double exponent;
};

// Fits c_{k-i} = sum_r X_r r^{-i} for the distinct ratios among
// {rho, rho*sigma, sigma} to the newest cells and returns the tail
// sum_r X_r r / (1 - r) with the misfit on the next older cell.
inline std::pair<double, double> fit_known_ratios(const std::array<double, 4>& hist, double rho,
                                                  double sigma) {
  std::vector<double> r = {rho};
  for (double cand : {rho * sigma, sigma}) {
    bool distinct = true;
    for (double x : r) distinct = distinct && std::abs(cand - x) > 0.02 * std::max(cand, x);
    if (distinct) r.push_back(cand);
  }
  const std::size_t m = r.size();
  std::array<std::array<double, 4>, 3> a{};  // augmented m x (m+1)
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) a[i][j] = std::pow(r[j], -static_cast<double>(i));
    a[i][m] = hist[i];
  }
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < m; ++i) {
      if (std::abs(a[i][col]) > std::abs(a[piv][col])) piv = i;
    }
    std::swap(a[col], a[piv]);
    if (a[col][col] == 0.0) return {0.0, std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < m; ++i) {
      if (i == col) continue;
      const double f = a[i][col] / a[col][col];
      for (std::size_t j = col; j <= m; ++j) a[i][j] -= f * a[col][j];
    }
  }
  double tail = 0.0;
  double pred = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double x = a[j][m] / a[j][j];
    tail += x * r[j] / (1.0 - r[j]);
    pred += x * std::pow(r[j], -static_cast<double>(m));
  }
  // Neglected terms decay at least like sigma per level.
  const double misfit = std::abs(pred - hist[m]) * std::pow(sigma, static_cast<double>(m));
  return {tail, misfit / (1.0 - std::max(rho, sigma))};
}

}  // namespace detail

/**
 * Integrates g over J.
 *
 * `singularities` outside J are ignored; several entries at the same location
 * keep the most negative exponent. `breakpoints` are split points where g is
 * discontinuous but bounded. A declared exponent <= -1 on J, non-finite cell
 * values, or partial sums beyond the divergence threshold return
 * `divergent = true` with value +inf.
 */
template <class F>
  requires std::invocable<F&, double>
QuadResult integrate(F&& g, const Interval& J, std::span<const Singularity> singularities,
                     std::span<const double> breakpoints, const QuadOptions& opt = {}) {
  if (!(opt.tol > 0.0)) throw UsageError("quadrature tolerance must be positive");
  const double a = J.a();
  const double b = J.b();

  QuadResult out;
  auto diverge = [&out]() {
    out.value = std::numeric_limits<double>::infinity();
    out.divergent = true;
    out.converged = true;
    out.abs_error_estimate = 0.0;
    return out;
  };

  std::vector<detail::SpecialPoint> points;
  points.push_back({a, false, 0.0});
  points.push_back({b, false, 0.0});
  for (const auto& s : singularities) {
    if (s.at < a || s.at > b) continue;
    if (!is_integrable_exponent(s.exponent)) return diverge();
    points.push_back({s.at, true, s.exponent});
  }
  for (double bp : breakpoints) {
    if (bp > a && bp < b) points.push_back({bp, false, 0.0});
  }
  std::sort(points.begin(), points.end(),
            [](const auto& x, const auto& y) { return x.at < y.at; });
  std::vector<detail::SpecialPoint> merged;
  for (const auto& p : points) {
    if (!merged.empty() && merged.back().at == p.at) {
      auto& m = merged.back();
      if (p.graded) {
        m.exponent = m.graded ? std::min(m.exponent, p.exponent) : p.exponent;
        m.graded = true;
      }
    } else {
      merged.push_back(p);
    }
  }

  std::priority_queue<detail::Cell, std::vector<detail::Cell>, detail::ByError> heap;
  double tail_value = 0.0;
  double tail_error = 0.0;
  double running = 0.0;
  int count = 0;
  bool blew_up = false;

  auto eval_cell = [&](double lo, double hi) {
    detail::Cell c = detail::kronrod15(g, lo, hi);
    ++count;
    if (!std::isfinite(c.value)) blew_up = true;
    running += c.value;
    if (std::abs(running) > opt.divergence_threshold) blew_up = true;
    heap.push(c);
    return c;
  };

  const double sigma = opt.grading_ratio;
  // Cells grading from the singular end `c` toward the other end `d`.
  auto grade = [&](double c, double d, double s) {
    const double L = d - c;
    const double rho = std::pow(sigma, s + 1.0);
    // Below this distance t = c +- dist carries too few significant digits.
    const double floor_width = 1e-8 * std::abs(c);
    std::array<double, 4> hist{};  // last four cell values, newest first
    double scale = 1.0;            // sigma^k
    for (int k = 0;; ++k) {
      const double outer = c + L * scale;
      const double inner = c + L * scale * sigma;
      const auto cell = eval_cell(std::min(inner, outer), std::max(inner, outer));
      if (blew_up) return;
      std::rotate(hist.rbegin(), hist.rbegin() + 1, hist.rend());
      hist[0] = cell.value;
      scale *= sigma;
      const double tail = hist[0] * rho / (1.0 - rho);
      const double target = 1e-3 * std::max(opt.tol, opt.rel_tol * std::abs(running));
      const bool small = k >= 1 && std::abs(tail) <= target;
      const bool exhausted = k + 1 >= opt.max_grading_levels ||
                             std::abs(L) * scale * sigma < floor_width ||
                             count >= opt.max_subdivisions;
      if (!(small || exhausted)) continue;
      if (!opt.extrapolate_tail) {
        tail_error += std::abs(tail);
        return;
      }
      double value = tail;
      double error = (k >= 1) ? std::abs(hist[0] - rho * hist[1]) / (1.0 - rho) : std::abs(tail);
      if (k >= 3) {
        // Cells behave like A rho^j + D tau^j, the second term coming from the
        // smooth or regular part of g. With d_j = c_j - rho c_{j-1} = D' tau^j
        // the exact tail is the plain one plus d_k tau / ((1 - tau)(1 - rho)).
        const double d0 = hist[0] - rho * hist[1];
        const double d1 = hist[1] - rho * hist[2];
        const double d2 = hist[2] - rho * hist[3];
        const double tau = d1 != 0.0 ? d0 / d1 : 0.0;
        if (tau > 0.0 && tau < 0.9) {
          const double v = tail + d0 * tau / ((1.0 - tau) * (1.0 - rho));
          const double e = std::abs(d1 - tau * d2) / ((1.0 - tau) * (1.0 - rho)) + 1e-15 * std::abs(v);
          if (e < error) {
            value = v;
            error = e;
          }
        }
        // Singular part times a smooth factor plus a regular part: the ratios
        // rho, rho*sigma and sigma, fitted to the last three cells and checked
        // against the fourth.
        if (const auto fit = detail::fit_known_ratios(hist, rho, sigma); fit.second < error) {
          value = fit.first;
          error = fit.second + 1e-15 * std::abs(fit.first);
        }
      }
      tail_value += value;
      tail_error += error;
      return;
    }
  };

  for (std::size_t i = 0; i + 1 < merged.size() && !blew_up; ++i) {
    const auto& l = merged[i];
    const auto& r = merged[i + 1];
    if (l.graded && r.graded) {
      const double m = 0.5 * (l.at + r.at);
      grade(l.at, m, l.exponent);
      if (!blew_up) grade(r.at, m, r.exponent);
    } else if (l.graded) {
      grade(l.at, r.at, l.exponent);
    } else if (r.graded) {
      grade(r.at, l.at, r.exponent);
    } else {
      eval_cell(l.at, r.at);
    }
  }
  if (blew_up) return diverge();

  auto sum_cells = [&heap]() {
    double v = 0.0;
    double e = 0.0;
    auto copy = heap;
    while (!copy.empty()) {
      v += copy.top().value;
      e += copy.top().error;
      copy.pop();
    }
    return std::pair{v, e};
  };

  auto [cells_value, cells_error] = sum_cells();
  auto target = [&]() {
    return std::max(opt.tol, opt.rel_tol * std::abs(cells_value + tail_value));
  };
  while (cells_error + tail_error > target() && tail_error <= target() &&
         count + 2 <= opt.max_subdivisions && !heap.empty()) {
    const detail::Cell worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;
    heap.pop();
    cells_value -= worst.value;
    cells_error -= worst.error;
    const auto c1 = eval_cell(worst.a, mid);
    const auto c2 = eval_cell(mid, worst.b);
    if (blew_up) return diverge();
    cells_value += c1.value + c2.value;
    cells_error += c1.error + c2.error;
  }
  std::tie(cells_value, cells_error) = sum_cells();

  out.value = cells_value + tail_value;
  out.abs_error_estimate = cells_error + tail_error;
  out.subdivisions = count;
  out.converged = out.abs_error_estimate <= target();
  if (std::abs(out.value) > opt.divergence_threshold) return diverge();
  if (!out.converged && opt.strict) {
    throw NonConvergent("quadrature error estimate " + std::to_string(out.abs_error_estimate) +
                        " above tolerance after " + std::to_string(count) + " cells");
  }
  return out;
}

template <class F>
  requires std::invocable<F&, double>
QuadResult integrate(F&& g, const Interval& J, std::span<const Singularity> singularities,
                     double tol) {
  QuadOptions opt;
  opt.tol = tol;
  return integrate(std::forward<F>(g), J, singularities, std::span<const double>{}, opt);
}

}  // namespace grandlab
