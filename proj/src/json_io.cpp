#include "sparsegf2/json_io.hpp"

#include <cmath>
#include <cstdio>

namespace sparsegf2 {

using nlohmann::json;

const char* version() { return SPARSEGF2_VERSION; }

json num(double v) {
  if (!std::isfinite(v)) return {{"value", nullptr}, {"decimal", std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf")}};
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return {{"value", v}, {"decimal", buf}};
}

json num(const BigReal& v) {
  // digits guaranteed by the precision, minus a couple for rounding
  const unsigned digits = std::max(17u, static_cast<unsigned>(v.precision()) - 2);
  return {{"value", to_double(v)}, {"decimal", to_decimal(v, digits)}};
}

json num(const Rational& q) {
  PrecisionScope scope(kDefaultPrecisionBits);
  json j = num(to_bigreal(q));
  j["exact"] = q.str();
  return j;
}

json output_header(const std::string& command, const json& config) {
  return {{"tool", "sparsegf2"}, {"version", version()}, {"command", command}, {"config", config}};
}

namespace {

json options_json(const ThresholdOptions& o) {
  return {{"curve_points", o.curve_points}, {"gamma_points", o.gamma_points}, {"min_prominence", o.min_prominence},
          {"tol_F", o.tol_F},               {"alpha_tol", o.alpha_tol},       {"route_tol", o.route_tol},
          {"t_max", o.t_max}};
}

json opt_num(const std::optional<double>& v) { return v ? num(*v) : json(nullptr); }

}  // namespace

json to_json(const ThresholdReport& r) {
  json j;
  j["rho"] = r.dist;
  j["rho_spec"] = r.dist.to_spec();
  j["alpha_sharp"] = num(r.alpha_sharp);
  j["sharp_at_zero"] = r.sharp_at_zero;
  j["alpha_star"] = num(r.alpha_star.value);
  j["alpha_star_routes"] = {{"stationary", opt_num(r.alpha_star.stationary_route)},
                            {"lambda", opt_num(r.alpha_star.lambda_route)}};
  if (r.alpha_bar)
    j["alpha_bar"] = {{"value", num(r.alpha_bar->value)},
                      {"x_star", num(r.alpha_bar->x_star)},
                      {"via_jump", r.alpha_bar->via_jump},
                      {"transversal", r.alpha_bar->transversal}};
  else
    j["alpha_bar"] = nullptr;
  if (r.x_star_fixed) {
    const auto& it = *r.x_star_fixed;
    j["x_star_iteration"] = {{"x_star", num(it.x_star)},
                             {"steps", it.lower.size()},
                             {"gap", it.gap},
                             {"monotone", it.monotone}};
  } else {
    j["x_star_iteration"] = nullptr;
  }
  j["discontinuities"] = json::array();
  for (const auto& d : r.discontinuities)
    j["discontinuities"].push_back({{"alpha", num(d.alpha)}, {"g_left", num(d.g_left)}, {"g_right", num(d.g_right)}});
  j["psi_roots"] = json::array();
  for (double x : r.psi_roots) j["psi_roots"].push_back(num(x));
  j["sign_events"] = json::array();
  for (const auto& e : r.sign_events)
    j["sign_events"].push_back({{"alpha", num(e.alpha)}, {"sign", e.sign}, {"at_jump", e.at_jump}});
  j["sign_pattern"] = r.sign_pattern;
  j["witness"] = {{"alpha", num(r.witness_alpha)},
                  {"F", num(r.witness.value)},
                  {"gamma0", num(r.witness.gamma0)},
                  {"beta0", num(r.witness.beta0)}};
  j["options"] = options_json(r.options);
  return j;
}

json to_json(const CoreStats& s, bool with_edges) {
  json j = {{"core_rows", s.core_rows},         {"occupied_cols", s.occupied_cols},
            {"incidences", s.incidences},       {"rows_by_weight", s.rows_by_weight},
            {"cols_by_degree", s.cols_by_degree}};
  if (with_edges) {
    std::vector<std::size_t> idx;
    for (std::size_t e = 0; e < s.edge_in_core.size(); ++e)
      if (s.edge_in_core[e]) idx.push_back(e);
    j["core_edges"] = idx;
  }
  if (!s.trace.empty()) {
    json t = json::array();
    for (const auto& [rows, cols] : s.trace) t.push_back({rows, cols});
    j["trace"] = t;
  }
  return j;
}

json to_json(const CoreTheory& t) {
  return {{"alpha", num(t.alpha)},
          {"g_star", num(t.g_star)},
          {"mu", num(t.mu)},
          {"nu", num(t.nu)},
          {"core_row_frac", num(t.core_row_frac)},
          {"occupied_col_frac", num(t.occupied_col_frac)},
          {"incidence_frac", num(t.incidence_frac)},
          {"aspect_sign", t.aspect_sign},
          {"at_discontinuity", t.at_discontinuity},
          {"degree_pmf", t.degree_pmf}};
}

json to_json(const BigResult& r) {
  PrecisionScope scope(r.bits_used);
  json j = num(r.value);
  j["bits_used"] = r.bits_used;
  j["exact_zero"] = r.exact_zero;
  if (!r.exact_zero && r.value > 0) {
    // the double field underflows long before the value does
    j["log"] = num(BigReal(log(r.value)));
  }
  return j;
}

json to_json(const VerifyReport& r) {
  json j = {{"suite", r.suite}, {"passed", r.passed()}, {"failures", r.failures()},
            {"seconds", r.seconds}, {"checks", json::array()}};
  for (const auto& c : r.checks) {
    json cj = {{"name", c.name}, {"expected", c.expected}, {"got", c.got}, {"pass", c.pass}};
    if (c.tol > 0) {
      cj["abs_err"] = c.abs_err;
      cj["tol"] = c.tol;
    }
    j["checks"].push_back(cj);
  }
  return j;
}

json table1_json(unsigned bits) {
  json rows = json::array();
  for (int r = 1; r <= 8; ++r) {
    const auto dist = WeightDist::point_mass(r);
    CurveAnalysis curves(dist);
    json row = {{"r", r}, {"alpha_sharp", num(curves.alpha_sharp())}};
    if (r >= 3) {
      PrecisionScope scope(bits);
      row["alpha_star"] = num(alpha_star_lambda_big(r, bits));
      const BigReal x = x_star_big(r, bits);
      const BigReal bar = -log(BigReal(1) - x) / (BigReal(r) * pow(x, r - 1));
      row["alpha_bar"] = num(bar);
      row["x_star"] = num(x);
    } else {
      row["alpha_star"] = num(alpha_star(dist).value);
      row["alpha_bar"] = nullptr;  // undefined below weight 3
      row["x_star"] = nullptr;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace sparsegf2
