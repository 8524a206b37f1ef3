#include "periodfn/example.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace periodfn::example {

Expression gs_expression() { return Expression::parse(kGsExpression); }

ParamBinding gs_params(double s) { return ParamBinding{{"s", s}}; }

Potential gs_potential(double s, double search_limit) {
  return Potential::build(gs_expression(), gs_params(s), search_limit);
}

std::vector<ReferenceRoot> reference_roots() {
  return {
      {0, -0.01073718589, -0.015, -0.001},
      {1, -0.005545373709, -0.015, -0.001},
      {2, -0.04074327315, -0.05, -0.04},
      {2, 0.04369965656, 0.04, 0.05},
  };
}

std::vector<PrintedVariant> printed_f1(double s) {
  // g''(0) = 1/s, g^(4)(0) = 12/s.
  const double a2 = 1.0 / s;
  const double a4 = 12.0 / s;
  return {
      {"theorem", -7.0 / 9.0 * a2 * a2 * a2 + a4 / 5.0},
      {"appendix", 7.0 / 9.0 * a2 * a2 * a2 - a4 / 5.0},
      {"example_line", -12.0 / (5.0 * s) + 7.0 / (9.0 * s * s * s)},
  };
}

std::vector<PrintedVariant> printed_f2(double s) {
  const double a2 = 1.0 / s;
  const double a4 = 12.0 / s;
  const double a6 = 80.0 / s;
  const double p = 28550.0 * std::pow(a2, 6) - 10320.0 * a2 * a2 * a2 * a4 + 81.0 * a4 * a4 +
                   270.0 * a2 * a6;
  const double s2 = s * s;
  return {
      {"theorem", -p / (4050.0 * a2)},
      {"appendix", -p / (2025.0 * a2)},
      {"example_line", -(16632.0 * s2 * s2 - 14275.0 - 61920.0 * s2) / (2025.0 * s2 * s2 * s)},
  };
}

double matching_root(const SignReport& report, double target, double lo, double hi) {
  double best = std::numeric_limits<double>::quiet_NaN();
  for (double r : report.roots) {
    if (r < lo || r > hi) continue;
    if (std::isnan(best) || std::abs(r - target) < std::abs(best - target)) best = r;
  }
  return best;
}

namespace {

double deviation(const SignReport& report, const ReferenceRoot& ref) {
  const double r = matching_root(report, ref.value, ref.lo, ref.hi);
  return std::isnan(r) ? std::numeric_limits<double>::infinity() : std::abs(r - ref.value);
}

}  // namespace

VariantResolution resolve_printed_variants(const Potential& gs, double s, int grid,
                                           double tolerance) {
  VariantResolution out;
  out.tolerance = tolerance;
  out.best_n1_deviation = std::numeric_limits<double>::infinity();
  const auto refs = reference_roots();
  const double f0 = -1.0 / (3.0 * s);

  std::vector<double> n1_dev;
  for (const PrintedVariant& v1 : printed_f1(s)) {
    const SignReport r1 = sign_scan(gs, CriterionPolynomial{1, {f0, v1.value}}, grid);
    n1_dev.push_back(deviation(r1, refs[1]));
    out.best_n1_deviation = std::min(out.best_n1_deviation, n1_dev.back());
  }
  const auto f1s = printed_f1(s);
  const auto f2s = printed_f2(s);
  for (std::size_t i = 0; i < f1s.size(); ++i) {
    for (const PrintedVariant& v2 : f2s) {
      const SignReport r2 = sign_scan(gs, CriterionPolynomial{2, {f0, f1s[i].value, v2.value}}, grid);
      VariantCombination c;
      c.f1_source = f1s[i].source;
      c.f2_source = v2.source;
      c.f1 = f1s[i].value;
      c.f2 = v2.value;
      c.n1_deviation = n1_dev[i];
      c.n2_deviation = std::max(deviation(r2, refs[2]), deviation(r2, refs[3]));
      if (c.n2_deviation <= tolerance) {
        out.consistent_f1.push_back(c.f1_source);
        out.consistent_f2.push_back(c.f2_source);
      }
      out.combinations.push_back(c);
    }
  }
  for (auto* list : {&out.consistent_f1, &out.consistent_f2}) {
    std::sort(list->begin(), list->end());
    list->erase(std::unique(list->begin(), list->end()), list->end());
  }
  return out;
}

}  // namespace periodfn::example
