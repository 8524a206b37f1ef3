#include "report.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "periodfn/period.hpp"

namespace periodfn::cli {

namespace {

Json sign_report_json(const SignReport& r) {
  Json j;
  j["overall"] = std::string(overall_name(r.overall));
  j["sign_near_zero"] = std::string(sign_name(r.sign_near_zero));
  j["leading_order"] = r.leading_order;
  j["leading_coefficient"] = jnum(r.leading_coefficient);
  j["epsilon"] = jnum(r.epsilon);
  j["roots"] = jnums(r.roots);
  j["definite_interval"] = jnums({r.definite_lo, r.definite_hi});
  j["grid"] = r.grid;
  return j;
}

std::string policy_name(CoefficientPolicy p) {
  return p == CoefficientPolicy::resolved ? "resolved" : "identified";
}

}  // namespace

Json analysis_report(const std::string& expression_text, const Potential& pot,
                     const AnalyzeOptions& opts) {
  Json j;
  const CenterDomain& d = pot.domain();

  Json potential;
  potential["expression"] = expression_text;
  Json params = Json::object();
  for (const auto& [name, value] : pot.params()) params[name] = jnum(value);
  potential["parameters"] = params;
  potential["g_at_zero"] = jnum(pot.series()[0]);
  potential["dg_at_zero"] = jnum(pot.series()[1]);
  Json derivs = Json::object();
  for (int k = 2; k <= 6; ++k) derivs[std::to_string(k)] = jnum(pot.series().derivative_at_zero(k));
  potential["derivatives_at_zero"] = derivs;
  const HypothesisReport hyp = check_hypothesis(pot, 400);
  potential["hypothesis"] = {{"pass", hyp.pass},
                             {"min_xg_over_x2", jnum(hyp.min_xg_over_x2)},
                             {"max_G_minus_cbar", jnum(hyp.max_G_minus_cbar)}};
  j["potential"] = potential;

  j["domain"] = {{"a", jnum(d.a)},
                 {"b", jnum(d.b)},
                 {"c_bar", jnum(d.c_bar)},
                 {"left_kind", std::string(boundary_kind_name(d.left_kind))},
                 {"right_kind", std::string(boundary_kind_name(d.right_kind))},
                 {"search_limit", jnum(d.search_limit)}};

  const MonotonicityVerdict v = monotonicity_verdict(pot, opts.order, opts.policy, opts.grid);

  Json coeffs;
  coeffs["policy"] = policy_name(opts.policy);
  coeffs["used"] = jnums(v.criteria.back().poly.derivs);
  coeffs["identified"] = jnums(v.coefficients.identified.derivs);
  Json printed = Json::array();
  for (std::size_t k = 0; k < v.coefficients.printed.size(); ++k) {
    const double id = v.coefficients.identified.derivs[k];
    for (const PrintedVariant& pv : v.coefficients.printed[k]) {
      const double diff = std::abs(pv.value - id);
      const bool consistent = diff <= 1e-8 * std::abs(id) || diff <= 1e-12;
      printed.push_back({{"k", k},
                         {"source", pv.source},
                         {"value", jnum(pv.value)},
                         {"consistent_with_identification", consistent}});
    }
  }
  coeffs["printed"] = printed;
  coeffs["odd_constraint_residual"] = jnum(v.coefficients.odd_constraint_residual);
  coeffs["odd_residue"] = jnum(v.coefficients.odd_residue);
  j["coefficients"] = coeffs;

  Json criteria = Json::array();
  for (const CnResult& c : v.criteria) {
    criteria.push_back({{"n", c.n},
                        {"status", std::string(cn_status_name(c.status))},
                        {"restricted_sign", std::string(sign_name(c.restricted_sign))},
                        {"c_valid", jnum(c.c_valid)},
                        {"derivs", jnums(c.poly.derivs)},
                        {"scan", sign_report_json(c.report)}});
  }
  j["criteria"] = criteria;

  Json opial;
  Json quantities = Json::array();
  for (const ChainQuantity& q : v.opial.quantities) {
    quantities.push_back({{"name", q.name},
                          {"sign", std::string(uniform_sign_name(q.sign))},
                          {"implies", std::string(direction_name(q.implies))},
                          {"min", jnum(q.min)},
                          {"max", jnum(q.max)}});
  }
  opial["quantities"] = quantities;
  opial["g2_at_zero"] = jnum(v.opial.g2_at_zero);
  opial["g2_vanishes"] = v.opial.g2_vanishes;
  opial["g4_at_zero"] = jnum(v.opial.g4_at_zero);
  opial["proposition_applicable"] = v.opial.proposition_applicable;
  j["opial_chain"] = opial;

  Json verdict;
  verdict["direction"] = std::string(direction_name(v.direction));
  verdict["witness"] = witness_label(v.witness);
  verdict["restricted"] = v.witness.restricted;
  verdict["c_valid"] = jnum(v.c_valid);
  verdict["notes"] = v.notes;
  j["verdict"] = verdict;

  // Short cross-check of T over the energy range the verdict covers.
  const double c_top = v.direction == Direction::inconclusive ? d.c_bar : v.c_valid;
  const double c_max = 0.9 * c_top;
  const double c_min = 1e-2 * c_max;
  Json table;
  table["c_min"] = jnum(c_min);
  table["c_max"] = jnum(c_max);
  table["steps"] = opts.table_steps;
  const PeriodTable pt = period_table(pot, c_min, c_max, opts.table_steps);
  table["flag"] = std::string(monotone_flag_name(pt.flag));
  Json samples = Json::array();
  for (const PeriodSample& s : pt.samples) {
    samples.push_back({{"c", jnum(s.c)},
                       {"T", jnum(s.T)},
                       {"dTdc", jnum(s.dTdc)},
                       {"err", jnum(s.err_estimate)}});
  }
  table["samples"] = samples;
  const bool agrees =
      (v.direction == Direction::increasing && pt.flag == MonotoneFlag::increasing) ||
      (v.direction == Direction::decreasing && pt.flag == MonotoneFlag::decreasing) ||
      v.direction == Direction::inconclusive;
  table["agrees_with_verdict"] = agrees;
  j["period_table"] = table;
  return j;
}

namespace {

std::string text_value(const Json& v) {
  if (v.is_null()) return "nan";
  if (v.is_number_float()) return num(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

std::string text_list(const Json& arr) {
  std::string out = "[";
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (i > 0) out += ", ";
    out += text_value(arr[i]);
  }
  return out + "]";
}

}  // namespace

std::string render_text(const Json& r) {
  std::string out;
  auto line = [&](const std::string& s) { out += s + "\n"; };
  const Json& p = r["potential"];
  line("g(x) = " + p["expression"].get<std::string>());
  for (const auto& [k, v] : p["parameters"].items()) line("  " + k + " = " + text_value(v));
  line("g(0) = " + text_value(p["g_at_zero"]) + ", g'(0) = " + text_value(p["dg_at_zero"]));
  line("hypothesis: " + std::string(p["hypothesis"]["pass"].get<bool>() ? "pass" : "FAIL"));

  const Json& d = r["domain"];
  line(fmt::format("domain: a = {} ({}), b = {} ({}), c_bar = {}", text_value(d["a"]),
                   text_value(d["left_kind"]), text_value(d["b"]), text_value(d["right_kind"]),
                   text_value(d["c_bar"])));

  const Json& c = r["coefficients"];
  line("coefficients (" + c["policy"].get<std::string>() + "): " + text_list(c["used"]));
  line("identified: " + text_list(c["identified"]));
  for (const Json& pv : c["printed"]) {
    line(fmt::format("  printed f^({})(0) {} = {}{}", pv["k"].get<int>(),
                     pv["source"].get<std::string>(), text_value(pv["value"]),
                     pv["consistent_with_identification"].get<bool>() ? "" : " (differs)"));
  }

  for (const Json& cn : r["criteria"]) {
    const Json& s = cn["scan"];
    line(fmt::format("C{}: {} (near 0: {}, roots {}, definite {}, c_valid {})",
                     cn["n"].get<int>(), cn["status"].get<std::string>(),
                     s["sign_near_zero"].get<std::string>(), text_list(s["roots"]),
                     text_list(s["definite_interval"]), text_value(cn["c_valid"])));
  }
  for (const Json& q : r["opial_chain"]["quantities"]) {
    line(fmt::format("chain {}: {} ({})", q["name"].get<std::string>(),
                     q["sign"].get<std::string>(), q["implies"].get<std::string>()));
  }
  const Json& v = r["verdict"];
  if (v["direction"].get<std::string>() == "inconclusive") {
    line("verdict: inconclusive");
  } else {
    line(fmt::format("verdict: {} via {} for 0 < c <= {}{}", v["direction"].get<std::string>(),
                     v["witness"].get<std::string>(), text_value(v["c_valid"]),
                     v["restricted"].get<bool>() ? " (restricted)" : ""));
  }
  for (const Json& n : v["notes"]) line("  note: " + n.get<std::string>());
  const Json& t = r["period_table"];
  line(fmt::format("period table on [{}, {}]: {}", text_value(t["c_min"]), text_value(t["c_max"]),
                   t["flag"].get<std::string>()));
  for (const Json& s : t["samples"]) {
    line(fmt::format("  c = {}  T = {}  dT/dc = {}", text_value(s["c"]), text_value(s["T"]),
                     text_value(s["dTdc"])));
  }
  return out;
}

}  // namespace periodfn::cli
