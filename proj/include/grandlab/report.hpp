#pragma once

/**
 * @file report.hpp
 * @brief Serialization of experiment results: CSV rows with 17 significant
 *        digits and JSON objects. Infinite values appear as `inf` in CSV and
 *        as JSON null next to a `divergent: true` flag.
 */

#include <cmath>
#include <cstdio>
#include <string>

#include <json.hpp>

#include "grandlab/grand_norm.hpp"
#include "grandlab/muckenhoupt.hpp"
#include "grandlab/witness.hpp"

namespace grandlab {

using nlohmann::json;

/// %.17g, with inf / -inf / nan spelled out.
inline std::string fmt17(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline json json_number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

inline json to_json(const EpsSearchResult& r) {
  return {{"value", json_number(r.value)},
          {"eps_star", r.eps_star},
          {"boundary_attained", r.boundary_attained},
          {"divergent", r.divergent},
          {"tail_value", json_number(r.tail_value)}};
}

inline json to_json(const Interval& J) { return json::array({J.a(), J.b()}); }

inline json to_json(const ApReport& r) {
  json pinned = json::array();
  for (const auto& pp : r.pinned) {
    pinned.push_back({{"k", pp.k}, {"left", json_number(pp.left)}, {"right", json_number(pp.right)}});
  }
  return {{"r", r.r},
          {"constant_estimate", json_number(r.constant_estimate)},
          {"divergent", r.divergent},
          {"verdict", r.divergent ? "INF" : "finite"},
          {"argmax_interval", to_json(r.argmax_interval)},
          {"grid_n", r.grid_n},
          {"pinned", pinned}};
}

inline json to_json(const BlowupPoint& pt) {
  return {{"k", pt.k},           {"absJ", pt.absJ()},     {"logJ", pt.logJ},
          {"eps_J", pt.eps_J},   {"eta_J", pt.eta_J},     {"norm_p", pt.norm_p},
          {"norm_q", pt.norm_q}, {"ratio", pt.ratio},     {"dfactor", json_number(pt.dfactor)}};
}

inline json to_json(const SweepReport& r) {
  json pts = json::array();
  for (const auto& pt : r.points) pts.push_back(to_json(pt));
  return {{"operator", to_string(r.op)},
          {"p", r.pair.p()},
          {"alpha", r.pair.alpha()},
          {"q", r.pair.q()},
          {"theta1", r.theta1},
          {"theta2", r.theta2},
          {"threshold", r.pair.threshold_factor() * r.theta1},
          {"slope", r.slope},
          {"predicted_slope", r.predicted_slope},
          {"verdict", r.verdict()},
          {"points", pts}};
}

inline constexpr const char* kSweepCsvHeader = "k,absJ,eps_J,eta_J,norm_p,norm_q,ratio,dfactor";

/// Header, one row per point, then `verdict=...`.
inline std::string sweep_csv(const SweepReport& r) {
  std::string out = kSweepCsvHeader;
  out += '\n';
  for (const auto& pt : r.points) {
    out += std::to_string(pt.k);
    for (double v : {pt.absJ(), pt.eps_J, pt.eta_J, pt.norm_p, pt.norm_q, pt.ratio, pt.dfactor}) {
      out += ',';
      out += fmt17(v);
    }
    out += '\n';
  }
  out += "verdict=" + r.verdict() + '\n';
  return out;
}

inline json to_json(const SobolevRatioReport& r) {
  return {{"ratio", json_number(r.ratio)},
          {"divergent", std::isinf(r.ratio)},
          {"numerator", to_json(r.numerator)},
          {"denominator", to_json(r.denominator)}};
}

inline json to_json(const Remark51Report& r) {
  json samples = json::array();
  for (std::size_t i = 0; i < r.sample_t.size(); ++i) {
    samples.push_back({{"t", r.sample_t[i]}, {"scaled_potential", r.sample_scaled[i]}});
  }
  return {{"grand_norm_f", json_number(r.grand_norm_f)},
          {"eps_star", r.eps_star},
          {"lp_divergent", r.lp_divergent},
          {"c1", r.c1},
          {"c2", r.c2},
          {"envelope_ratio", r.c2 / r.c1},
          {"potential_grand_norm", json_number(r.potential_grand_norm)},
          {"potential_grand_finite", r.potential_grand_finite},
          {"lq_divergent", r.lq_divergent},
          {"samples", samples}};
}

}  // namespace grandlab
