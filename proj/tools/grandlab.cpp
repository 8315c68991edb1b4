// grandlab: command-line front end for the grand Lebesgue space lab.
//
//   grandlab norm      --p 2 --theta 1 --f power:-0.5
//   grandlab potential --kind riesz --alpha 0.5 --x 0.5 --f one
//   grandlab apconst   --r 2 --weight power:0.5
//   grandlab blowup    --op riesz --p 2 --alpha 0.25 --theta1 1 --theta2 1 --kmin 8 --kmax 60 --kstep 4
//   grandlab sobolev   --p 2 --alpha 0.25 --theta 1 --weight power:1 --family indicators
//
// Exit codes: 0 success, 2 usage error, 3 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "grandlab/grandlab.hpp"

namespace gl = grandlab;
using gl::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct Common {
  double tol = 1e-9;
  std::string format = "table";
  std::string out;
  std::string config;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--tol", c.tol, "quadrature tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--format", c.format, "output format")
      ->check(CLI::IsMember({"table", "json", "csv"}));
  sub->add_option("--out", c.out, "write the report to this path instead of stdout");
  sub->add_option("--config", c.config, "flat key=value file; command-line flags take precedence");
}

// ---- config file -----------------------------------------------------------

const std::set<std::string> kBoolFlags = {"sobolev", "remark51"};
const std::set<std::string> kSubcommands = {"norm", "potential", "apconst", "blowup", "sobolev"};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool argv_has(const std::vector<std::string>& args, const std::string& flag) {
  for (const auto& a : args) {
    if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

// Splices the config file's settings into argv for every flag not given there.
std::vector<std::string> apply_config(std::vector<std::string> args) {
  std::string path;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  std::ifstream in(path);
  if (!in) throw gl::UsageError("cannot read config file '" + path + "'");

  bool has_sub = false;
  for (std::size_t i = 1; i < args.size(); ++i) has_sub = has_sub || kSubcommands.contains(args[i]);

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw gl::UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    for (auto& ch : key) {
      if (ch == '_') ch = '-';
    }
    if (key == "subcommand") {
      if (!has_sub) {
        args.insert(args.begin() + 1, value);
        has_sub = true;
      }
      continue;
    }
    const std::string flag = "--" + key;
    if (key == "config" || argv_has(args, flag)) continue;
    if (kBoolFlags.contains(key)) {
      if (value == "true" || value == "1") args.push_back(flag);
      continue;
    }
    args.push_back(flag);
    args.push_back(value);
  }
  return args;
}

// ---- rendering -------------------------------------------------------------

std::string scalar_text(const json& v) {
  if (v.is_null()) return "inf";
  if (v.is_number_float()) return gl::fmt17(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

bool is_scalar(const json& v) { return !v.is_object() && !v.is_array(); }

// RFC 4180 quoting; function terms such as sum:(a),(b) contain commas.
std::string csv_field(std::string s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + '"';
}

// Rows of a flat-object array as comma-separated lines with a header.
std::string rows_csv(const json& rows) {
  std::string out;
  if (rows.empty()) return out;
  bool first = true;
  for (const auto& [k, v] : rows.front().items()) {
    if (!is_scalar(v)) continue;
    out += (first ? "" : ",") + k;
    first = false;
  }
  out += '\n';
  for (const auto& row : rows) {
    first = true;
    for (const auto& [k, v] : row.items()) {
      if (!is_scalar(v)) continue;
      out += (first ? "" : ",") + csv_field(scalar_text(v));
      first = false;
    }
    out += '\n';
  }
  return out;
}

std::string rows_table(const json& rows) {
  std::vector<std::string> keys;
  for (const auto& [k, v] : rows.front().items()) {
    if (is_scalar(v)) keys.push_back(k);
  }
  std::vector<std::vector<std::string>> cells;
  std::vector<std::size_t> width;
  for (const auto& k : keys) width.push_back(k.size());
  for (const auto& row : rows) {
    std::vector<std::string> line;
    for (std::size_t c = 0; c < keys.size(); ++c) {
      line.push_back(row.contains(keys[c]) ? scalar_text(row[keys[c]]) : "");
      width[c] = std::max(width[c], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  auto emit = [&](const std::vector<std::string>& line) {
    std::string s;
    for (std::size_t c = 0; c < line.size(); ++c) {
      s += line[c] + std::string(width[c] - line[c].size() + 2, ' ');
    }
    while (!s.empty() && s.back() == ' ') s.pop_back();
    return s + '\n';
  };
  std::string out = emit(keys);
  for (const auto& line : cells) out += emit(line);
  return out;
}

// Scalars as "key  value" lines, then each array of rows as a table.
std::string render_table(const json& j) {
  std::string out;
  std::size_t w = 0;
  for (const auto& [k, v] : j.items()) {
    if (is_scalar(v)) w = std::max(w, k.size());
  }
  for (const auto& [k, v] : j.items()) {
    if (is_scalar(v)) out += k + std::string(w - k.size() + 2, ' ') + scalar_text(v) + '\n';
  }
  for (const auto& [k, v] : j.items()) {
    if (v.is_array() && !v.empty() && v.front().is_object()) {
      out += '\n' + k + ":\n" + rows_table(v);
    } else if (v.is_object()) {
      out += '\n' + k + ":\n" + render_table(v);
    }
  }
  return out;
}

// Top-level scalars as a single header/value pair; `rows_key` names an array
// rendered as rows instead.
std::string render_csv(const json& j, const std::string& rows_key) {
  if (!rows_key.empty() && j.contains(rows_key) && !j[rows_key].empty()) {
    return rows_csv(j[rows_key]);
  }
  json flat = json::object();
  for (const auto& [k, v] : j.items()) {
    if (is_scalar(v)) flat[k] = v;
  }
  return rows_csv(json::array({flat}));
}

struct Report {
  json body;
  std::string rows_key;    // array rendered as CSV rows
  std::string csv_override;  // exact CSV when the format is fixed
};

void emit(const Report& r, const Common& c) {
  std::string text;
  if (c.format == "json") {
    text = r.body.dump(2) + '\n';
  } else if (c.format == "csv") {
    text = r.csv_override.empty() ? render_csv(r.body, r.rows_key) : r.csv_override;
  } else {
    text = render_table(r.body);
  }
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw gl::UsageError("cannot write '" + c.out + "'");
  f << text;
}

// Invalid inputs surface from the library as domain errors; at the command
// line they are usage errors.
template <class F>
auto as_usage(F&& make) {
  try {
    return make();
  } catch (const gl::DomainError& e) {
    throw gl::UsageError(e.what());
  } catch (const gl::InvalidInterval& e) {
    throw gl::UsageError(e.what());
  }
}

gl::Func01 parse_f(const std::string& s) {
  return as_usage([&] { return gl::Func01::parse(s); });
}
gl::Weight parse_w(const std::string& s) {
  return as_usage([&] { return gl::Weight::parse(s); });
}

// ---- subcommands -----------------------------------------------------------

struct NormArgs {
  double p = 0.0;
  double theta = 1.0;
  std::string phi;
  std::optional<double> alpha;
  std::string f = "one";
  std::string weight = "one";
  std::vector<double> interval;
};

Report cmd_norm(const NormArgs& a, const Common& c) {
  std::optional<gl::SobolevPair> pair;
  if (a.alpha) pair.emplace(a.p, *a.alpha);
  const auto phi = as_usage([&] {
    auto ph = a.phi.empty() ? gl::PhiSpec::power(a.theta) : gl::PhiSpec::parse(a.phi, pair);
    ph.validate(a.p);
    return ph;
  });
  const auto f = parse_f(a.f);
  const auto w = parse_w(a.weight);
  std::optional<gl::Interval> J;
  if (!a.interval.empty()) {
    if (a.interval.size() != 2) throw gl::UsageError("--interval takes a,b");
    as_usage([&] { return J.emplace(a.interval[0], a.interval[1]), 0; });
  }
  const auto res = J ? gl::localized_grand_norm(f, a.p, phi, w, *J, c.tol)
                     : gl::phi_grand_norm(f, a.p, phi, w, c.tol);
  json j = {{"f", f.term()}, {"weight", w.term()}, {"p", a.p}, {"phi", phi.term()}};
  if (J) j["interval"] = gl::to_json(*J);
  j.update(gl::to_json(res));
  return {j, "", ""};
}

struct PotentialArgs {
  std::string kind = "riesz";
  double alpha = 0.0;
  double x = 0.0;
  std::string f = "one";
  std::string weight = "one";
  std::optional<double> p;
  int grid_n = 1024;
};

Report cmd_potential(const PotentialArgs& a, const Common& c) {
  const auto f = parse_f(a.f);
  const auto w = parse_w(a.weight);
  double v = 0.0;
  if (a.kind == "riesz") v = gl::riesz(f, a.alpha, a.x, c.tol);
  else if (a.kind == "left") v = gl::riesz_left(f, a.alpha, a.x, c.tol);
  else if (a.kind == "right") v = gl::riesz_right(f, a.alpha, a.x, c.tol);
  else if (a.kind == "maximal") v = gl::frac_maximal(f, a.alpha, a.x, a.grid_n, c.tol);
  else {
    if (!a.p) throw gl::UsageError("--kind kalpha needs --p");
    v = gl::apply_kalpha(f, w, gl::SobolevPair(*a.p, a.alpha), a.x, c.tol);
  }
  json j = {{"kind", a.kind}, {"alpha", a.alpha}, {"x", a.x}, {"f", f.term()}};
  if (a.kind == "kalpha") j["weight"] = w.term();
  if (a.kind == "maximal") j["grid_n"] = a.grid_n;
  j["value"] = gl::json_number(v);
  j["divergent"] = !std::isfinite(v);
  return {j, "", ""};
}

struct ApArgs {
  std::optional<double> r;
  bool sobolev = false;
  std::optional<double> p;
  std::optional<double> alpha;
  std::string weight = "one";
  int grid_n = 1024;
};

Report cmd_apconst(const ApArgs& a, const Common& c) {
  const auto w = parse_w(a.weight);
  gl::ApReport rep;
  json j = {{"weight", w.term()}};
  if (a.sobolev) {
    if (!a.p || !a.alpha) throw gl::UsageError("--sobolev needs --p and --alpha");
    const gl::SobolevPair pair(*a.p, *a.alpha);
    rep = gl::sobolev_ap_constant(w, pair, a.grid_n, c.tol);
    j["mode"] = "sobolev";
    j["p"] = pair.p();
    j["alpha"] = pair.alpha();
    j["q"] = pair.q();
  } else {
    if (!a.r) throw gl::UsageError("apconst needs --r or --sobolev");
    rep = gl::ap_constant(w, *a.r, a.grid_n, c.tol);
    j["mode"] = "ap";
  }
  j.update(gl::to_json(rep));
  if (w.kind() == gl::Weight::Kind::power && !a.sobolev) {
    j["power_weight_in_ap"] = gl::power_weight_in_ap(w.gamma(), *a.r);
  }
  return {j, "pinned", ""};
}

struct BlowupArgs {
  std::string op = "riesz";
  double p = 0.0;
  double alpha = 0.0;
  double theta1 = 1.0;
  double theta2 = 1.0;
  int kmin = 8;
  int kmax = 60;
  int kstep = 4;
  std::vector<int> ks;
};

Report cmd_blowup(const BlowupArgs& a, const Common&) {
  const auto op = gl::parse_operator(a.op);
  const gl::SobolevPair pair(a.p, a.alpha);
  const auto ks = a.ks.empty() ? gl::k_range(a.kmin, a.kmax, a.kstep) : a.ks;
  const auto rep = gl::blowup_sweep(op, pair, a.theta1, a.theta2, ks);
  return {gl::to_json(rep), "points", gl::sweep_csv(rep)};
}

struct SobolevArgs {
  std::optional<double> p;
  std::optional<double> alpha;
  double theta = 1.0;
  std::string weight = "one";
  std::string family;
  std::string probe;
  bool remark51 = false;
  std::string f;
  int kmin = 4;
  int kmax = 20;
  int mesh_n = 2048;
};

Report cmd_sobolev(const SobolevArgs& a, const Common& c) {
  if (!a.p || !a.alpha) throw gl::UsageError("sobolev needs --p and --alpha");
  const gl::SobolevPair pair(*a.p, *a.alpha);
  const auto w = parse_w(a.weight);
  json j = {{"p", pair.p()}, {"alpha", pair.alpha()}, {"q", pair.q()}};

  if (a.remark51) {
    j["mode"] = "remark51";
    j.update(gl::to_json(gl::remark51_check(pair, c.tol)));
    return {j, "samples", ""};
  }
  j["weight"] = w.term();
  if (a.probe == "necessity") {
    j["mode"] = "necessity";
    json rows = json::array();
    double first = 0.0;
    double last = 0.0;
    bool any_inf = false;
    for (int k = a.kmin; k <= a.kmax; ++k) {
      const double h = std::ldexp(1.0, -k);
      const double v = gl::necessity_quantity(w, pair, gl::Interval(0.0, h), c.tol);
      if (k == a.kmin) first = v;
      last = v;
      any_inf = any_inf || !std::isfinite(v);
      rows.push_back({{"k", k}, {"h", h}, {"quantity", gl::json_number(v)}, {"divergent", !std::isfinite(v)}});
    }
    const bool diverging = any_inf || last > 10.0 * first;
    j["verdict"] = diverging ? "diverging" : "bounded";
    j["growth"] = gl::json_number(last / first);
    j["rows"] = rows;
    return {j, "rows", ""};
  }
  if (!a.probe.empty()) throw gl::UsageError("unknown probe '" + a.probe + "' (necessity)");

  std::vector<gl::Func01> fs;
  if (a.family == "indicators") {
    fs = gl::sobolev_test_family();
    j["mode"] = "family";
  } else if (!a.family.empty()) {
    throw gl::UsageError("unknown family '" + a.family + "' (indicators)");
  } else if (!a.f.empty()) {
    fs.push_back(parse_f(a.f));
    j["mode"] = "single";
  } else {
    throw gl::UsageError("sobolev needs --family, --probe, --remark51 or --f");
  }
  j["theta"] = a.theta;
  j["target_theta"] = a.theta * pair.threshold_factor();
  json rows = json::array();
  double best = 0.0;
  for (const auto& f : fs) {
    const auto r = gl::sobolev_ratio(f, w, pair, a.theta, c.tol, a.mesh_n);
    best = std::max(best, r.ratio);
    rows.push_back({{"f", f.term()},
                    {"ratio", gl::json_number(r.ratio)},
                    {"numerator", gl::json_number(r.numerator.value)},
                    {"numerator_eps", r.numerator.eps_star},
                    {"denominator", gl::json_number(r.denominator.value)},
                    {"denominator_eps", r.denominator.eps_star}});
  }
  j["max_ratio"] = gl::json_number(best);
  j["finite"] = std::isfinite(best);
  j["rows"] = rows;
  return {j, "rows", ""};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for grand Lebesgue spaces on [0,1]"};
  app.require_subcommand(1);
  Common common;

  NormArgs na;
  auto* norm = app.add_subcommand("norm", "grand Lebesgue norm of a function");
  norm->add_option("--p", na.p)->required();
  norm->add_option("--theta", na.theta);
  norm->add_option("--phi", na.phi, "power:theta | sobolev | sobolev-composed:theta");
  norm->add_option("--alpha", na.alpha, "needed by the sobolev phi kinds");
  norm->add_option("--f", na.f, "function DSL term");
  norm->add_option("--weight", na.weight, "weight DSL term");
  norm->add_option("--interval", na.interval, "localize to [a,b]")->delimiter(',');
  add_common(norm, common);

  PotentialArgs pa;
  auto* pot = app.add_subcommand("potential", "pointwise potential operators");
  pot->add_option("--kind", pa.kind)->check(CLI::IsMember({"riesz", "left", "right", "maximal", "kalpha"}));
  pot->add_option("--alpha", pa.alpha)->required();
  pot->add_option("--x", pa.x)->required();
  pot->add_option("--f", pa.f);
  pot->add_option("--weight", pa.weight);
  pot->add_option("--p", pa.p, "needed by kalpha");
  pot->add_option("--grid-n", pa.grid_n);
  add_common(pot, common);

  ApArgs aa;
  auto* ap = app.add_subcommand("apconst", "Muckenhoupt constants");
  ap->add_option("--r", aa.r);
  ap->add_flag("--sobolev", aa.sobolev, "search the A_{1+q/p'} condition of the Sobolev pair");
  ap->add_option("--p", aa.p);
  ap->add_option("--alpha", aa.alpha);
  ap->add_option("--weight", aa.weight);
  ap->add_option("--grid-n", aa.grid_n);
  add_common(ap, common);

  BlowupArgs ba;
  auto* bl = app.add_subcommand("blowup", "witness sweep along shrinking intervals");
  bl->add_option("--op", ba.op)->check(CLI::IsMember({"riesz", "maximal", "left", "right"}));
  bl->add_option("--p", ba.p)->required();
  bl->add_option("--alpha", ba.alpha)->required();
  bl->add_option("--theta1", ba.theta1);
  bl->add_option("--theta2", ba.theta2);
  bl->add_option("--kmin", ba.kmin);
  bl->add_option("--kmax", ba.kmax);
  bl->add_option("--kstep", ba.kstep);
  bl->add_option("--k", ba.ks, "explicit k list")->delimiter(',');
  add_common(bl, common);

  SobolevArgs sa;
  auto* so = app.add_subcommand("sobolev", "one-weight Sobolev inequality probes");
  so->add_option("--p", sa.p);
  so->add_option("--alpha", sa.alpha);
  so->add_option("--theta", sa.theta);
  so->add_option("--weight", sa.weight);
  so->add_option("--family", sa.family, "indicators");
  so->add_option("--probe", sa.probe, "necessity");
  so->add_flag("--remark51", sa.remark51, "t^{-1/p} membership check");
  so->add_option("--f", sa.f, "single function DSL term");
  so->add_option("--kmin", sa.kmin);
  so->add_option("--kmax", sa.kmax);
  so->add_option("--mesh-n", sa.mesh_n);
  add_common(so, common);

  std::vector<std::string> args(argv, argv + argc);
  try {
    args = apply_config(std::move(args));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
  try {
    app.parse(std::move(rev));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    Report rep;
    if (*norm) rep = cmd_norm(na, common);
    else if (*pot) rep = cmd_potential(pa, common);
    else if (*ap) rep = cmd_apconst(aa, common);
    else if (*bl) rep = cmd_blowup(ba, common);
    else rep = cmd_sobolev(sa, common);
    emit(rep, common);
  } catch (const gl::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const gl::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }
  return 0;
}
