#include "reproduce.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>

#include <fmt/format.h>

#include "format.hpp"
#include "periodfn/errors.hpp"
#include "periodfn/example.hpp"
#include "periodfn/period.hpp"

namespace periodfn::cli {

namespace {

constexpr double kRootTolerance = 1e-7;
constexpr int kFigureGrid = 1201;
constexpr double kFigureHalfWidth = 0.06;
constexpr int kTableSteps = 20;

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw NumericError("cannot write " + path.string());
  f << text;
  if (!f) throw NumericError("failed writing " + path.string());
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

struct Summary {
  std::vector<std::string> lines;
  bool ok = true;
  void check(bool pass, const std::string& what) {
    lines.push_back(std::string(pass ? "PASS " : "FAIL ") + what);
    ok = ok && pass;
  }
};

Json variants_json(const std::vector<PrintedVariant>& vs) {
  Json arr = Json::array();
  for (const auto& v : vs) arr.push_back({{"source", v.source}, {"value", jnum(v.value)}});
  return arr;
}

// Distinct printed values among the variants named in `sources`.
std::set<std::string> distinct_values(const std::vector<PrintedVariant>& vs,
                                      const std::vector<std::string>& sources) {
  std::set<std::string> out;
  for (const auto& v : vs) {
    if (std::find(sources.begin(), sources.end(), v.source) != sources.end()) {
      out.insert(num(v.value));
    }
  }
  return out;
}

}  // namespace

bool reproduce_paper(const std::filesystem::path& dir, std::ostream& out) {
  std::filesystem::create_directories(dir);
  const double s = example::kReferenceS;
  const Potential gs = example::gs_potential(s);
  Summary sum;

  // Coefficients.
  const PowerSeries& ser = gs.series();
  const CriterionCoefficients cc = extract_criterion_coefficients(ser, 2);
  const CriterionPolynomial resolved = criterion_polynomial(gs, 2);
  const auto f1 = example::printed_f1(s);
  const auto f2 = example::printed_f2(s);
  const example::VariantResolution res = example::resolve_printed_variants(gs, s);

  Json cj;
  cj["s"] = jnum(s);
  Json derivs = Json::array();
  const std::array<std::pair<int, double>, 3> expected{{{2, 1.0 / s}, {4, 12.0 / s}, {6, 80.0 / s}}};
  for (const auto& [k, want] : expected) {
    const double got = ser.derivative_at_zero(k);
    derivs.push_back({{"k", k}, {"value", jnum(got)}, {"expected", jnum(want)}});
    sum.check(rel(got, want) <= 1e-10,
              fmt::format("g^({})(0) = {} (expected {}, rel dev {})", k, num(got), num(want),
                          num(rel(got, want))));
  }
  cj["derivatives_at_zero"] = derivs;
  cj["g3_at_zero"] = jnum(ser.derivative_at_zero(3));
  cj["odd_constraint_residual"] = jnum(cc.odd_constraint_residual);
  cj["f0"] = {{"identified", jnum(cc.identified.derivs[0])}, {"expected", jnum(-1.0 / (3.0 * s))}};
  sum.check(std::abs(cc.identified.derivs[0] + 1.0 / (3.0 * s)) <= 1e-12,
            fmt::format("f(0) = {} (expected -1/(3s) = {})", num(cc.identified.derivs[0]),
                        num(-1.0 / (3.0 * s))));
  cj["printed_f1"] = variants_json(f1);
  cj["printed_f2"] = variants_json(f2);
  cj["identified"] = jnums(cc.identified.derivs);
  cj["resolved"] = jnums(resolved.derivs);
  Json combos = Json::array();
  for (const auto& c : res.combinations) {
    combos.push_back({{"f1_source", c.f1_source},
                      {"f2_source", c.f2_source},
                      {"f1", jnum(c.f1)},
                      {"f2", jnum(c.f2)},
                      {"n1_root_deviation", jnum(c.n1_deviation)},
                      {"n2_root_deviation", jnum(c.n2_deviation)}});
  }
  cj["resolution"] = {{"tolerance", jnum(res.tolerance)},
                      {"combinations", combos},
                      {"consistent_f1", res.consistent_f1},
                      {"consistent_f2", res.consistent_f2},
                      {"best_n1_root_deviation", jnum(res.best_n1_deviation)}};
  write_file(dir / "coefficients.json", cj.dump(2) + "\n");

  const auto f1_values = distinct_values(f1, res.consistent_f1);
  const auto f2_values = distinct_values(f2, res.consistent_f2);
  sum.check(f1_values.size() == 1,
            fmt::format("exactly one printed f'(0) value reproduces the n=2 roots ({} found)",
                        f1_values.size()));
  sum.check(f2_values.size() == 1,
            fmt::format("exactly one printed f''(0) value reproduces the n=2 roots ({} found)",
                        f2_values.size()));
  sum.check(res.best_n1_deviation <= res.tolerance,
            fmt::format("some printed f'(0) reproduces the n=1 root (best deviation {})",
                        num(res.best_n1_deviation)));
  for (int k = 1; k <= 2; ++k) {
    const double id = cc.identified.derivs[static_cast<std::size_t>(k)];
    const double used = resolved.derivs[static_cast<std::size_t>(k)];
    sum.check(rel(id, used) <= 1e-8,
              fmt::format("identified f^({})(0) = {} matches the resolved printed value {}", k,
                          num(id), num(used)));
  }

  // Criteria and figure data.
  std::array<CnResult, 3> cn;
  for (int n = 0; n <= 2; ++n) {
    cn[static_cast<std::size_t>(n)] = check_Cn(gs, n);
    const CnResult& c = cn[static_cast<std::size_t>(n)];
    const CriterionEvaluation eval(gs, c.poly);
    write_file(dir / fmt::format("scan_K{}.csv", n),
               scan_csv(eval, c.report, -kFigureHalfWidth, kFigureHalfWidth, kFigureGrid));
  }

  std::string roots = "n,reference,computed,deviation,pass\n";
  for (const auto& ref : example::reference_roots()) {
    const double got = example::matching_root(cn[static_cast<std::size_t>(ref.n)].report,
                                              ref.value, ref.lo, ref.hi);
    const double dev = std::isnan(got) ? std::numeric_limits<double>::infinity()
                                       : std::abs(got - ref.value);
    const bool pass = dev <= kRootTolerance;
    roots += fmt::format("{},{},{},{},{}\n", ref.n, num(ref.value), num(got), num(dev),
                         pass ? "PASS" : "FAIL");
    sum.check(pass, fmt::format("K{} root {} reproduced within {} (got {}, deviation {})", ref.n,
                                num(ref.value), num(kRootTolerance), num(got), num(dev)));
  }
  write_file(dir / "roots.csv", roots);

  sum.check(cn[0].status == CnStatus::fails,
            fmt::format("C0 fails (status {})", cn_status_name(cn[0].status)));
  sum.check(cn[1].status == CnStatus::fails,
            fmt::format("C1 fails (status {})", cn_status_name(cn[1].status)));
  sum.check(cn[2].status == CnStatus::holds_negative,
            fmt::format("C2 holds_negative (status {})", cn_status_name(cn[2].status)));
  const SignReport& r2 = cn[2].report;
  sum.check(cn[2].restricted_sign == Sign::negative && std::abs(r2.definite_lo + 0.0407) <= 5e-4 &&
                std::abs(r2.definite_hi - 0.0437) <= 5e-4,
            fmt::format("K2 negative on definite interval [{}, {}] ~ [-0.0407, 0.0437]",
                        num(r2.definite_lo), num(r2.definite_hi)));

  const MonotonicityVerdict v = monotonicity_verdict(gs, 2);
  sum.check(v.direction == Direction::decreasing,
            fmt::format("verdict {} via {}", direction_name(v.direction),
                        witness_label(v.witness)));

  const double c_alpha = std::min(gs.G(r2.definite_lo), gs.G(r2.definite_hi));
  const PeriodTable table = period_table(gs, 1e-2 * c_alpha, 0.95 * c_alpha, kTableSteps);
  write_file(dir / "period_table.csv", period_csv(table));
  sum.check(table.flag == MonotoneFlag::decreasing,
            fmt::format("T strictly decreasing on {} energies in (0, {}) (flag {})", kTableSteps,
                        num(c_alpha), monotone_flag_name(table.flag)));

  std::string text;
  for (const auto& l : sum.lines) text += l + "\n";
  write_file(dir / "summary.txt", text);
  out << text;
  return sum.ok;
}

}  // namespace periodfn::cli
