#include "format.hpp"

#include <cmath>
#include <cstdlib>

#include <fmt/format.h>

namespace periodfn::cli {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  // Avoid printing "-0".
  if (v == 0.0) v = 0.0;
  return fmt::format("{:.12g}", v);
}

Json jnum(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::strtod(num(v).c_str(), nullptr);
}

Json jnums(const std::vector<double>& v) {
  Json arr = Json::array();
  for (double x : v) arr.push_back(jnum(x));
  return arr;
}

std::string period_csv(const PeriodTable& table) {
  std::string out = "c,T,dTdc,err\n";
  for (const PeriodSample& s : table.samples) {
    out += fmt::format("{},{},{},{}\n", num(s.c), num(s.T), num(s.dTdc), num(s.err_estimate));
  }
  return out;
}

std::string scan_csv(const CriterionEvaluation& eval, const SignReport& report, double xmin,
                     double xmax, int points) {
  std::string out = "x,K\n";
  for (int i = 0; i < points; ++i) {
    const double x =
        points == 1 ? xmin : xmin + (xmax - xmin) * static_cast<double>(i) / (points - 1);
    out += fmt::format("{},{}\n", num(x), num(x == 0.0 ? 0.0 : eval.K(x)));
  }
  std::vector<std::string> roots;
  for (double r : report.roots) {
    if (r >= xmin && r <= xmax) roots.push_back(num(r));
  }
  out += fmt::format("# n={} sign_near_zero={} overall={}\n", report.n,
                     sign_name(report.sign_near_zero), overall_name(report.overall));
  out += fmt::format("# roots: {}\n", roots.empty() ? "none" : fmt::format("{}", fmt::join(roots, ",")));
  return out;
}

}  // namespace periodfn::cli
