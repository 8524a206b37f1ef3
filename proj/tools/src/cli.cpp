#include "periodfn/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "format.hpp"
#include "periodfn/errors.hpp"
#include "periodfn/expr.hpp"
#include "periodfn/period.hpp"
#include "periodfn/potential.hpp"
#include "report.hpp"
#include "reproduce.hpp"

namespace periodfn::cli {

namespace {

// Bad command-line values; reported with the parse exit code.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct Shared {
  std::string g;
  std::vector<std::string> params;
  double search_limit = kDefaultSearchLimit;
  int order = 2;
  std::string coefficients = "resolved";
  std::string out;
};

void add_shared(CLI::App* sub, Shared& s, bool needs_g) {
  auto* g = sub->add_option("--g", s.g, "Expression for g(x)");
  if (needs_g) g->required();
  sub->add_option("--param", s.params, "Parameter binding NAME=VAL (repeatable)");
  sub->add_option("--search-limit", s.search_limit, "Half-width searched for the well")
      ->capture_default_str();
  sub->add_option("--order", s.order, "Highest criterion index n")->capture_default_str();
  sub->add_option("--coefficients", s.coefficients, "Criterion coefficients")
      ->check(CLI::IsMember({"resolved", "identified"}))
      ->capture_default_str();
  sub->add_option("--out", s.out, "Output path");
}

ParamBinding parse_params(const std::vector<std::string>& items) {
  ParamBinding p;
  for (const std::string& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw UsageError("--param expects NAME=VAL, got '" + item + "'");
    }
    const std::string name = item.substr(0, eq);
    const std::string text = item.substr(eq + 1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
      throw UsageError("parameter " + name + " has non-numeric value '" + text + "'");
    }
    if (!p.emplace(name, value).second) throw UsageError("parameter " + name + " given twice");
  }
  return p;
}

CoefficientPolicy policy_of(const Shared& s) {
  return s.coefficients == "identified" ? CoefficientPolicy::identified
                                        : CoefficientPolicy::resolved;
}

struct Loaded {
  Expression expr;
  Potential pot;
};

Loaded load(const Shared& s) {
  if (s.order < 0 || s.order > 4) throw UsageError("--order must be in 0..4");
  Expression e = Expression::parse(s.g);
  const ParamBinding params = parse_params(s.params);
  for (const std::string& name : e.parameters()) {
    if (params.find(name) == params.end()) {
      throw UsageError("unbound parameter '" + name + "' (use --param " + name + "=VAL)");
    }
  }
  return {e, Potential::build(e, params, s.search_limit)};
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw NumericError("cannot open " + path + " for writing");
  f << text;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monotonicity of the period function of x'' + g(x) = 0", "periodfn"};
  app.require_subcommand(1);

  Shared analyze_s;
  bool json = false;
  auto* analyze = app.add_subcommand("analyze", "Run criteria, Opial chain and verdict");
  add_shared(analyze, analyze_s, true);
  analyze->add_flag("--json", json, "Emit the report as JSON");

  Shared period_s;
  std::optional<double> cmin;
  std::optional<double> cmax;
  int steps = 10;
  auto* period = app.add_subcommand("period", "Tabulate T(c) as CSV");
  add_shared(period, period_s, true);
  period->add_option("--cmin", cmin, "Smallest energy (default 1e-3 c_bar)");
  period->add_option("--cmax", cmax, "Largest energy (default 0.9 c_bar)");
  period->add_option("--steps", steps, "Number of energies")->capture_default_str();

  Shared scan_s;
  int n = 0;
  std::optional<double> xmin;
  std::optional<double> xmax;
  int grid = kDefaultScanGrid;
  auto* scan = app.add_subcommand("scan", "Sample K_n as CSV with its roots");
  add_shared(scan, scan_s, true);
  scan->add_option("--n", n, "Criterion index")->capture_default_str();
  scan->add_option("--xmin", xmin, "Left end (default a)");
  scan->add_option("--xmax", xmax, "Right end (default b)");
  scan->add_option("--grid", grid, "Grid points")->capture_default_str();

  Shared inv_s;
  double x = 0.0;
  auto* involution = app.add_subcommand("involution", "Evaluate A(x)");
  add_shared(involution, inv_s, true);
  involution->add_option("--x", x, "Point in [a, b]")->required();

  std::string repro_out = "paper-repro";
  auto* repro = app.add_subcommand("reproduce-paper", "Reproduce the g_s worked example");
  repro->add_option("--out", repro_out, "Output directory")->capture_default_str();

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      err << "error: usage: " << one_line(e.what()) << "\n";
      return kExitParse;
    }

    if (analyze->parsed()) {
      const Loaded l = load(analyze_s);
      AnalyzeOptions opts;
      opts.order = analyze_s.order;
      opts.policy = policy_of(analyze_s);
      const Json report = analysis_report(analyze_s.g, l.pot, opts);
      emit(json ? report.dump(2) + "\n" : render_text(report), analyze_s.out, out);
    } else if (period->parsed()) {
      const Loaded l = load(period_s);
      const double c_bar = l.pot.domain().c_bar;
      const double lo = cmin.value_or(1e-3 * c_bar);
      const double hi = cmax.value_or(0.9 * c_bar);
      if (steps < 2) throw UsageError("--steps must be at least 2");
      if (!(lo > 0.0 && lo < hi && hi < c_bar)) {
        throw UsageError("need 0 < cmin < cmax < c_bar = " + num(c_bar));
      }
      emit(period_csv(period_table(l.pot, lo, hi, steps)), period_s.out, out);
    } else if (scan->parsed()) {
      const Loaded l = load(scan_s);
      const CenterDomain& d = l.pot.domain();
      if (n < 0 || n > 4) throw UsageError("--n must be in 0..4");
      if (grid < 1000) throw UsageError("--grid must be at least 1000");
      const double lo = xmin.value_or(d.a);
      const double hi = xmax.value_or(d.b);
      if (!(lo >= d.a && lo < hi && hi <= d.b)) {
        throw UsageError("need a <= xmin < xmax <= b with [a, b] = [" + num(d.a) + ", " +
                         num(d.b) + "]");
      }
      const CriterionPolynomial poly = criterion_polynomial(l.pot, n, policy_of(scan_s));
      const SignReport report = sign_scan(l.pot, poly, grid);
      emit(scan_csv(CriterionEvaluation(l.pot, poly), report, lo, hi, grid), scan_s.out, out);
    } else if (involution->parsed()) {
      const Loaded l = load(inv_s);
      const double a = involution_at(l.pot, x);
      emit(fmt::format("x,A,G_x,G_A\n{},{},{},{}\n", num(x), num(a), num(l.pot.G(x)),
                       num(l.pot.G(a))),
           inv_s.out, out);
    } else if (repro->parsed()) {
      if (!reproduce_paper(repro_out, out)) {
        err << "error: reproduction: one or more checks failed (see " << repro_out
            << "/summary.txt)\n";
        return kExitNumeric;
      }
    }
    return kExitOk;
  } catch (const ParseError& e) {
    err << "error: parse: " << one_line(e.what()) << "\n";
    return kExitParse;
  } catch (const UsageError& e) {
    err << "error: usage: " << one_line(e.what()) << "\n";
    return kExitParse;
  } catch (const HypothesisError& e) {
    err << "error: hypothesis: " << one_line(e.what()) << "\n";
    return kExitHypothesis;
  } catch (const std::exception& e) {
    err << "error: numeric: " << one_line(e.what()) << "\n";
    return kExitNumeric;
  }
}

}  // namespace periodfn::cli
