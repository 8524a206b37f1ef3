// Acceptance suite: one PASS/FAIL line per criterion. Exit status is 0 only
// when every criterion passes.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "periodfn/cli.hpp"
#include "periodfn/criteria.hpp"
#include "periodfn/example.hpp"
#include "periodfn/period.hpp"
#include "support/oracles.hpp"

using namespace periodfn;
namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void check(bool ok, std::string what) {
    pass = pass && ok;
    details.push_back((ok ? "" : "!") + std::move(what));
  }
};

Potential make(const std::string& g, double limit = kDefaultSearchLimit) {
  return Potential::build(parse(g), {}, limit);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// [1] published roots of K_0, K_1, K_2 for g_s within 1e-7.
Outcome published_roots() {
  Outcome o;
  const Potential gs = example::gs_potential();
  std::vector<SignReport> reports;
  for (int n = 0; n <= 2; ++n) reports.push_back(sign_scan(gs, criterion_polynomial(gs, n)));
  for (const auto& ref : example::reference_roots()) {
    const double x = example::matching_root(reports[static_cast<std::size_t>(ref.n)], ref.value,
                                            ref.lo, ref.hi);
    const double dev = std::isnan(x) ? INFINITY : std::abs(x - ref.value);
    o.check(dev <= 1e-7, fmt::format("K{} root {:.10g} vs {:.10g} dev {:.2e}", ref.n, x,
                                     ref.value, dev));
  }
  return o;
}

// [2] g''(0) = 1/s, g''''(0) = 12/s, g^(6)(0) = 80/s by series lift.
Outcome gs_derivatives() {
  Outcome o;
  for (double s : {0.5, 0.647, 1.0}) {
    const PowerSeries c = example::gs_expression().taylor_at_zero(example::gs_params(s), 8);
    const double e = std::max({rel(c.derivative_at_zero(2), 1 / s),
                               rel(c.derivative_at_zero(4), 12 / s),
                               rel(c.derivative_at_zero(6), 80 / s)});
    o.check(e <= 1e-10, fmt::format("s={} max rel err {:.1e}", s, e));
  }
  return o;
}

// [3] one consistent printed variant each, matching identification; f(0).
Outcome coefficient_resolution() {
  Outcome o;
  const double s = example::kReferenceS;
  const Potential gs = example::gs_potential();
  const example::VariantResolution vr = example::resolve_printed_variants(gs, s);
  auto distinct = [](const std::vector<PrintedVariant>& printed,
                     const std::vector<std::string>& sources) {
    std::vector<double> values;
    for (const auto& p : printed) {
      if (std::find(sources.begin(), sources.end(), p.source) == sources.end()) continue;
      if (std::none_of(values.begin(), values.end(),
                       [&](double v) { return rel(p.value, v) <= 1e-12; })) {
        values.push_back(p.value);
      }
    }
    return values;
  };
  const auto f1 = distinct(example::printed_f1(s), vr.consistent_f1);
  const auto f2 = distinct(example::printed_f2(s), vr.consistent_f2);
  o.check(f1.size() == 1, fmt::format("{} consistent f'(0) value(s)", f1.size()));
  o.check(f2.size() == 1, fmt::format("{} consistent f''(0) value(s)", f2.size()));
  o.check(vr.best_n1_deviation <= 1e-7,
          fmt::format("best K1 root dev over f'(0) variants {:.2e}", vr.best_n1_deviation));
  const CriterionCoefficients cc = extract_criterion_coefficients(gs.series(), 2);
  if (!f1.empty()) {
    o.check(rel(cc.identified.derivs[1], f1[0]) <= 1e-8,
            fmt::format("identified f'(0) {:.10g} vs {:.10g}", cc.identified.derivs[1], f1[0]));
  }
  if (!f2.empty()) {
    o.check(rel(cc.identified.derivs[2], f2[0]) <= 1e-8,
            fmt::format("identified f''(0) {:.10g} vs {:.10g}", cc.identified.derivs[2], f2[0]));
  }
  o.check(rel(cc.identified.derivs[0], -1 / (3 * s)) <= 1e-12,
          fmt::format("f(0) rel err {:.1e}", rel(cc.identified.derivs[0], -1 / (3 * s))));
  return o;
}

// [4] g = x.
Outcome isochronous() {
  Outcome o;
  const Potential p = make("x");
  double worst = 0;
  for (double c : {0.1, 1.0, 10.0}) worst = std::max(worst, std::abs(period_at(p, c).T - kTwoPi));
  o.check(worst <= 1e-10, fmt::format("max |T - 2pi| {:.1e}", worst));
  bool zero = true;
  for (int n = 0; n <= 2; ++n) {
    zero = zero && sign_scan(p, criterion_polynomial(p, n)).overall == Overall::vanishing;
  }
  o.check(zero, "K0..K2 vanish");
  const MonotonicityVerdict v = monotonicity_verdict(p, 2);
  o.check(v.direction == Direction::inconclusive,
          fmt::format("verdict {}", direction_name(v.direction)));
  return o;
}

// [5] pendulum against 4 K(sqrt(2)/2).
Outcome pendulum() {
  Outcome o;
  const double T = period_at(make("sin(x)"), 1.0).T;
  const double agm = static_cast<double>(4 * oracle::elliptic_K(std::sqrt(0.5L)));
  o.check(std::abs(T - 7.41629870921) <= 1e-8, fmt::format("T(1) = {:.14g}", T));
  o.check(std::abs(T - agm) <= 1e-8, fmt::format("AGM {:.14g}", agm));
  return o;
}

// [6] T(1e-8) near 2 pi.
Outcome small_energy() {
  Outcome o;
  const std::vector<std::pair<std::string, Potential>> pots = {
      {"g_s", example::gs_potential()}, {"x+x^2", make("x + x^2")}, {"sin", make("sin(x)")}};
  for (const auto& [name, p] : pots) {
    const double d = std::abs(period_at(p, 1e-8).T - kTwoPi);
    o.check(d <= 1e-5, fmt::format("{} {:.1e}", name, d));
  }
  return o;
}

// [7] g = x + x^2.
Outcome quadratic() {
  Outcome o;
  const Potential p = make("x + x^2");
  const CenterDomain& d = p.domain();
  const double e = std::max({std::abs(d.a + 1), std::abs(d.b - 0.5), std::abs(d.c_bar - 1.0 / 6)});
  o.check(e <= 1e-10, fmt::format("domain err {:.1e}", e));
  const CnStatus c0 = check_Cn(p, 0).status;
  o.check(c0 == CnStatus::holds_positive, fmt::format("C0 {}", cn_status_name(c0)));
  const MonotoneFlag f = period_table(p, 1e-4, 0.16, 20).flag;
  o.check(f == MonotoneFlag::increasing, fmt::format("table {}", monotone_flag_name(f)));
  return o;
}

// [8] the worked example's verdict.
Outcome example_verdict() {
  Outcome o;
  const Potential gs = example::gs_potential();
  const CnResult c0 = check_Cn(gs, 0), c1 = check_Cn(gs, 1), c2 = check_Cn(gs, 2);
  o.check(c0.status == CnStatus::fails, fmt::format("C0 {}", cn_status_name(c0.status)));
  o.check(c1.status == CnStatus::fails, fmt::format("C1 {}", cn_status_name(c1.status)));
  o.check(c2.status == CnStatus::holds_negative,
          fmt::format("C2 {} (restricted {})", cn_status_name(c2.status),
                      sign_name(c2.restricted_sign)));
  const double lo = c2.report.definite_lo, hi = c2.report.definite_hi;
  o.check(std::abs(lo + 0.0407) <= 5e-5 && std::abs(hi - 0.0437) <= 5e-5,
          fmt::format("definite [{:.6f}, {:.6f}]", lo, hi));
  const MonotonicityVerdict v = monotonicity_verdict(gs, 2);
  o.check(v.direction == Direction::decreasing,
          fmt::format("verdict {} via {}", direction_name(v.direction), witness_label(v.witness)));
  const double cv = std::min(gs.G(lo), gs.G(hi));
  const MonotoneFlag f = period_table(gs, 1e-3 * cv, 0.99 * cv, 20).flag;
  o.check(f == MonotoneFlag::decreasing,
          fmt::format("table on (0, {:.4e}) {}", cv, monotone_flag_name(f)));
  return o;
}

// [9] involution invariants.
Outcome involution() {
  Outcome o;
  const std::vector<std::pair<std::string, Potential>> pots = {
      {"x", make("x")},          {"x+x^2", make("x + x^2")},       {"sin", make("sin(x)")},
      {"x+x^3", make("x + x^3", 2.0)}, {"x-x^3", make("x - x^3", 2.0)}, {"g_s", example::gs_potential()}};
  double round = 0, energy = 0, series_ratio = 0;
  for (const auto& [name, p] : pots) {
    const CenterDomain& d = p.domain();
    for (int i = 0; i < 200; ++i) {
      const double x = d.a + (d.b - d.a) * (i + 0.5) / 200;
      const double A = involution_at(p, x);
      round = std::max(round, std::abs(involution_at(p, A) - x));
      energy = std::max(energy, std::abs(p.G(A) - p.G(x)) / std::max(1.0, p.G(x)));
    }
    // Root-based A against the cubic truncation: the error is the x^4 term.
    const PowerSeries cubic = p.involution().with_order(3);
    const double a4 = std::abs(p.involution()[4]);
    for (double x : {1e-2, 5e-3, 2.5e-3}) {
      const double err = std::abs(involution_root(p, x) - cubic.evaluate(x));
      series_ratio = std::max(series_ratio, err / (1.2 * a4 * std::pow(x, 4) + 1e-15));
    }
  }
  o.check(round <= 1e-9, fmt::format("sup |A(A(x)) - x| {:.1e}", round));
  o.check(energy <= 1e-12, fmt::format("sup energy err {:.1e}", energy));
  o.check(series_ratio <= 1.2, fmt::format("|A - A_3| / (1.2 |a_4| x^4 + 1e-15) <= {:.3f}", series_ratio));
  return o;
}

// [10] Opial chain on x + x^3 and x - x^3.
Outcome opial() {
  Outcome o;
  struct Case {
    const char* g;
    Direction expect;
  };
  for (const Case& c : {Case{"x + x^3", Direction::decreasing}, Case{"x - x^3", Direction::increasing}}) {
    const Potential p = make(c.g, 2.0);
    const OpialReport r = opial_chain_report(p);
    std::string signs;
    bool all = true;
    for (const auto& q : r.quantities) {
      signs += fmt::format("{}{} {}", signs.empty() ? "" : ", ", q.name, uniform_sign_name(q.sign));
      all = all && q.implies == c.expect;
    }
    o.check(all, fmt::format("{}: {} => {}", c.g, signs, direction_name(c.expect)));
    const MonotonicityVerdict v = monotonicity_verdict(p, 2);
    o.check(v.direction == c.expect, fmt::format("verdict {}", direction_name(v.direction)));
    const double cb = p.domain().c_bar;
    int agree = 0;
    for (int i = 1; i <= 5; ++i) {
      const PeriodDerivative d = period_derivative(p, 0.15 * i * std::min(cb, 1.0));
      agree += d.sign() == (c.expect == Direction::increasing ? 1 : -1);
    }
    o.check(agree == 5, fmt::format("dT/dc sign agrees on {}/5", agree));
  }
  return o;
}

// [11] quadrature against the ODE on random energies.
Outcome ode_equivalence() {
  Outcome o;
  std::mt19937 rng(20240601);
  std::uniform_real_distribution<double> u(0.01, 0.9);
  const std::vector<std::pair<std::string, Potential>> pots = {
      {"x+x^2", make("x + x^2")}, {"sin", make("sin(x)")}, {"g_s", example::gs_potential()}};
  for (const auto& [name, p] : pots) {
    double worst = 0;
    for (int i = 0; i < 5; ++i) {
      const double c = u(rng) * p.domain().c_bar;
      worst = std::max(worst, rel(period_via_ode(p, c), period_at(p, c).T));
    }
    o.check(worst <= 1e-8, fmt::format("{} max rel {:.1e}", name, worst));
  }
  return o;
}

// [12] closed forms for g''(0) = 0.
Outcome a2_zero_forms() {
  Outcome o;
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  double e1 = 0, e2 = 0, ratio = 0;
  for (int t = 0; t < 10; ++t) {
    const double a4 = u(rng), a6 = u(rng);
    std::vector<double> c(25, 0.0);
    c[1] = 1;
    c[4] = a4 / 24;
    c[6] = a6 / 720;
    const auto d = extract_criterion_coefficients(PowerSeries(c), 2).identified.derivs;
    e1 = std::max(e1, rel(d[1], -a4 / 5));
    e2 = std::max(e2, rel(d[2], -a6 / 42));
    ratio = d[2] / (-a6 / 42);
  }
  o.check(e1 <= 1e-10, fmt::format("f'(0) = -a4/5 rel {:.1e}", e1));
  o.check(e2 <= 1e-10, fmt::format("f''(0) = -a6/42 rel {:.1e} (identified / printed = {:.6g})",
                                   e2, ratio));
  return o;
}

// [13] reproduce-paper twice, byte for byte.
Outcome determinism() {
  Outcome o;
  const fs::path base = fs::temp_directory_path() / "periodfn_acceptance";
  fs::remove_all(base);
  auto once = [&](const std::string& sub) {
    const std::string dir = (base / sub).string();
    const char* argv[] = {"periodfn", "reproduce-paper", "--out", dir.c_str()};
    std::ostringstream out, err;
    return cli::run_cli(4, argv, out, err);
  };
  once("a");
  once("b");
  auto read = [](const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(f), {});
  };
  int files = 0, same = 0;
  for (const auto& e : fs::directory_iterator(base / "a")) {
    ++files;
    same += read(e.path()) == read(base / "b" / e.path().filename());
  }
  o.check(files > 0 && same == files, fmt::format("{}/{} artifacts identical", same, files));
  fs::remove_all(base);
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"published roots of K0, K1, K2 within 1e-7", published_roots},
      {"g_s derivatives at 0 by series lift", gs_derivatives},
      {"coefficient variant resolution", coefficient_resolution},
      {"isochronous control g = x", isochronous},
      {"pendulum period against the AGM", pendulum},
      {"small-energy limit", small_energy},
      {"quadratic example g = x + x^2", quadratic},
      {"worked-example verdict for g_s", example_verdict},
      {"involution properties", involution},
      {"Opial chain on x + x^3 and x - x^3", opial},
      {"quadrature against ODE", ode_equivalence},
      {"closed forms for g''(0) = 0", a2_zero_forms},
      {"deterministic reproduction artifacts", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    std::string details;
    for (const auto& d : o.details) details += (details.empty() ? "" : "; ") + d;
    fmt::print("{} [{:2}] {}: {}\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, details);
    failed += !o.pass;
  }
  fmt::print("{} of {} criteria pass\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
