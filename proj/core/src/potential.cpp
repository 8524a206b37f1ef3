#include "periodfn/potential.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "periodfn/errors.hpp"
#include "periodfn/quadrature.hpp"

namespace periodfn {

namespace {

constexpr double kPanelWidth = 1.0 / 32.0;
constexpr std::size_t kPanelNodes = 20;
constexpr int kMaxPanelDepth = 12;
constexpr double kScanStep = kPanelWidth / 4.0;
constexpr double kZeroTolerance = 1e-13;
constexpr double kSeriesRadius = 5e-4;
constexpr double kBlendRadius = 1e-3;

std::string fmt_g(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

}  // namespace

std::string_view boundary_kind_name(BoundaryKind k) {
  switch (k) {
    case BoundaryKind::g_vanishes:
      return "g_vanishes";
    case BoundaryKind::energy_match:
      return "energy_match";
    case BoundaryKind::search_limit:
      return "search_limit";
  }
  return "?";
}

struct Potential::Impl {
  Impl(const Expression& e, const ParamBinding& p)
      : expr(e), dexpr(e.derivative()), d2expr(dexpr.derivative()), params(p),
        g(expr, p), dg(dexpr, p), d2g(d2expr, p) {}

  Expression expr;
  Expression dexpr;
  Expression d2expr;
  ParamBinding params;
  BoundExpression g;
  BoundExpression dg;
  BoundExpression d2g;
  PowerSeries gser;
  PowerSeries aser;

  // cumulative[k] = G(side * k * kPanelWidth); split[k] marks panels that
  // needed subdivision to converge.
  struct Side {
    std::vector<double> cumulative{0.0};
    std::vector<std::uint8_t> split;
    double extent = 0.0;
  };
  Side right;
  Side left;

  double checked_g(double x) const {
    const double v = g(x);
    if (!std::isfinite(v)) throw EvaluationError("g is not finite at x = " + fmt_g(x));
    return v;
  }

  double panel(double lo, double hi, int depth, bool& split) const {
    auto f = [this](double x) { return checked_g(x); };
    const double mid = 0.5 * (lo + hi);
    const double whole = gauss_legendre_integrate(f, lo, hi, kPanelNodes);
    const double l = gauss_legendre_integrate(f, lo, mid, kPanelNodes);
    const double r = gauss_legendre_integrate(f, mid, hi, kPanelNodes);
    const double halves = l + r;
    if (depth >= kMaxPanelDepth ||
        std::abs(whole - halves) <= 1e-14 * std::max(std::abs(halves), 1e-300)) {
      return halves;
    }
    split = true;
    return panel(lo, mid, depth + 1, split) + panel(mid, hi, depth + 1, split);
  }

  void tabulate(Side& side, int sign, double limit) {
    const auto panels = static_cast<std::size_t>(std::ceil(limit / kPanelWidth - 1e-12));
    for (std::size_t k = 0; k < panels; ++k) {
      const double lo = sign * static_cast<double>(k) * kPanelWidth;
      const double hi = sign * std::min(static_cast<double>(k + 1) * kPanelWidth, limit);
      bool split = false;
      double value = 0.0;
      try {
        value = panel(lo, hi, 0, split);
      } catch (const EvaluationError&) {
        break;
      }
      if (!std::isfinite(value)) break;
      side.cumulative.push_back(side.cumulative.back() + value);
      side.split.push_back(split ? 1 : 0);
      side.extent = std::abs(hi);
    }
  }

  double G(double x) const {
    if (x == 0.0) return 0.0;
    const Side& side = x > 0.0 ? right : left;
    const double ax = std::abs(x);
    if (ax > side.extent * (1.0 + 1e-15)) {
      throw EvaluationError("G requested at x = " + fmt_g(x) + " outside the tabulated range");
    }
    auto k = static_cast<std::size_t>(ax / kPanelWidth);
    k = std::min(k, side.split.size() - 1);
    const double start = (x > 0.0 ? 1.0 : -1.0) * static_cast<double>(k) * kPanelWidth;
    if (start == x) return side.cumulative[k];
    double rest = 0.0;
    if (side.split[k] != 0) {
      bool split = false;
      rest = panel(start, x, 0, split);
    } else {
      rest = gauss_legendre_integrate([this](double t) { return checked_g(t); }, start, x,
                                      kPanelNodes);
    }
    return side.cumulative[k] + rest;
  }
};

Potential Potential::build(const Expression& e, const ParamBinding& params,
                           double search_limit) {
  if (!(search_limit > 0.0) || !std::isfinite(search_limit)) {
    throw HypothesisError("search limit must be positive and finite");
  }
  auto impl = std::make_shared<Impl>(e, params);

  try {
    impl->gser = e.taylor_at_zero(params, kPotentialSeriesOrder);
  } catch (const SeriesError& err) {
    throw HypothesisError(std::string("g is not analytic at 0: ") + err.what());
  }
  const double g0 = impl->gser[0];
  const double g1 = impl->gser[1];
  if (std::abs(g0) > 1e-12) {
    throw HypothesisError("normalization violated: g(0) = " + fmt_g(g0) + " (expected 0)");
  }
  if (std::abs(g1 - 1.0) > 1e-9) {
    std::string msg = "normalization violated: g'(0) = " + fmt_g(g1) + " (expected 1)";
    if (g1 > 0.0) msg += "; substitute x -> x/sqrt(g'(0)) to normalize";
    throw HypothesisError(msg);
  }
  impl->aser = involution_series(impl->gser);

  impl->tabulate(impl->right, +1, search_limit);
  impl->tabulate(impl->left, -1, search_limit);

  Potential pot;
  pot.impl_ = std::move(impl);
  pot.domain_ = find_center_domain(pot, search_limit);

  const HypothesisReport report = check_hypothesis(pot, 400);
  if (!(report.min_xg_over_x2 > 0.0)) {
    throw HypothesisError("hypothesis violated: x g(x) <= 0 inside the located domain");
  }
  return pot;
}

Potential build_potential(const Expression& g, const ParamBinding& params,
                          double search_limit) {
  return Potential::build(g, params, search_limit);
}

const Expression& Potential::expression() const { return impl_->expr; }
const ParamBinding& Potential::params() const { return impl_->params; }
double Potential::g(double x) const { return impl_->g(x); }
double Potential::dg(double x) const { return impl_->dg(x); }
double Potential::d2g(double x) const { return impl_->d2g(x); }
double Potential::G(double x) const { return impl_->G(x); }
const PowerSeries& Potential::series() const { return impl_->gser; }
const PowerSeries& Potential::involution() const { return impl_->aser; }
const CenterDomain& Potential::domain() const { return domain_; }
double Potential::table_left() const { return impl_->left.extent; }
double Potential::table_right() const { return impl_->right.extent; }

double Potential::energy_preimage(double c, int side) const {
  return side > 0 ? energy_preimage(c, side, 0.0, domain_.b)
                  : energy_preimage(c, side, domain_.a, 0.0);
}

double Potential::energy_preimage(double c, int side, double lo, double hi) const {
  if (c <= 0.0) return 0.0;
  // G - c grows outward from 0, so it is negative at the inner end.
  auto f = [&](double x) { return impl_->G(x) - c; };
  double inner = side > 0 ? lo : hi;
  double outer = side > 0 ? hi : lo;
  const double f_inner = f(inner);
  const double f_outer = f(outer);
  if (f_outer <= 0.0) return outer;
  if (f_inner >= 0.0) return inner;
  double x0 = std::min(inner, outer);
  double x1 = std::max(inner, outer);
  double f0 = side > 0 ? f_inner : f_outer;
  double f1 = side > 0 ? f_outer : f_inner;
  std::uintmax_t iters = 200;
  auto [r0, r1] = boost::math::tools::toms748_solve(
      f, x0, x1, f0, f1, boost::math::tools::eps_tolerance<double>(52), iters);
  return 0.5 * (r0 + r1);
}

CenterDomain find_center_domain(const Potential& pot, double search_limit) {
  const Potential::Impl& im = *pot.impl_;
  CenterDomain d;
  d.search_limit = search_limit;

  auto locate = [&](int sign, double extent, double& bound, BoundaryKind& kind) {
    const double limit = std::min(search_limit, extent);
    if (!(limit > 0.0)) {
      throw HypothesisError("g cannot be evaluated on the " +
                            std::string(sign > 0 ? "right" : "left") + " of 0");
    }
    double prev = 0.0;
    const auto steps = static_cast<long>(std::ceil(limit / kScanStep - 1e-12));
    for (long i = 1; i <= steps; ++i) {
      const double x = sign * std::min(static_cast<double>(i) * kScanStep, limit);
      const double gx = im.g(x);
      if (gx == 0.0) {
        bound = x;
        kind = BoundaryKind::g_vanishes;
        return;
      }
      if (x * gx < 0.0) {
        auto fn = [&](double t) { return im.g(t); };
        std::uintmax_t iters = 200;
        auto tol = [](double u, double v) { return std::abs(u - v) <= kZeroTolerance; };
        const double lo = std::min(prev, x);
        const double hi = std::max(prev, x);
        auto [r0, r1] = boost::math::tools::toms748_solve(fn, lo, hi, tol, iters);
        bound = 0.5 * (r0 + r1);
        kind = BoundaryKind::g_vanishes;
        return;
      }
      prev = x;
    }
    bound = sign * limit;
    kind = BoundaryKind::search_limit;
  };

  locate(+1, im.right.extent, d.b, d.right_kind);
  locate(-1, im.left.extent, d.a, d.left_kind);

  const double Ga = im.G(d.a);
  const double Gb = im.G(d.b);
  d.c_bar = std::min(Ga, Gb);
  const double tol = 1e-12 * std::max(1.0, d.c_bar);
  if (Ga - Gb > tol) {
    d.a = pot.energy_preimage(d.c_bar, -1, d.a, 0.0);
    d.left_kind = BoundaryKind::energy_match;
  } else if (Gb - Ga > tol) {
    d.b = pot.energy_preimage(d.c_bar, +1, 0.0, d.b);
    d.right_kind = BoundaryKind::energy_match;
  }
  if (!(d.c_bar > 0.0)) throw HypothesisError("no energy levels enclose the center");
  return d;
}

double involution_root(const Potential& pot, double x) {
  const CenterDomain& d = pot.domain();
  const double slack = 1e-12 * std::max(1.0, d.b - d.a);
  if (x < d.a - slack || x > d.b + slack) {
    throw NumericError("involution requested at x = " + fmt_g(x) + " outside [a, b]");
  }
  if (x == 0.0) return 0.0;
  if (x >= d.b) return d.a;
  if (x <= d.a) return d.b;
  return pot.energy_preimage(pot.G(x), x > 0.0 ? -1 : +1);
}

double involution_at(const Potential& pot, double x) {
  const double ax = std::abs(x);
  if (ax >= kBlendRadius) return involution_root(pot, x);
  const double s = pot.involution().evaluate(x);
  if (ax <= kSeriesRadius) return s;
  const double t = (ax - kSeriesRadius) / (kBlendRadius - kSeriesRadius);
  return (1.0 - t) * s + t * involution_root(pot, x);
}

HypothesisReport check_hypothesis(const Potential& pot, int grid_size) {
  HypothesisReport r;
  r.grid_size = grid_size;
  if (grid_size < 100) {
    r.violations.push_back("grid_size must be at least 100");
    return r;
  }
  const CenterDomain& d = pot.domain();
  r.min_xg_over_x2 = std::numeric_limits<double>::infinity();
  r.max_G_minus_cbar = -std::numeric_limits<double>::infinity();
  bool monotone = true;
  // Interior points of a uniform grid on each side, ordered outward.
  for (int side : {+1, -1}) {
    const double end = side > 0 ? d.b : d.a;
    double prev = 0.0;
    for (int i = 1; i < grid_size; ++i) {
      const double x = end * static_cast<double>(i) / grid_size;
      const double gx = pot.g(x);
      const double Gx = pot.G(x);
      r.min_xg_over_x2 = std::min(r.min_xg_over_x2, gx / x);
      r.max_G_minus_cbar = std::max(r.max_G_minus_cbar, Gx - d.c_bar);
      if (!(Gx > prev)) monotone = false;
      prev = Gx;
    }
  }
  if (!(r.min_xg_over_x2 > 0.0)) r.violations.push_back("x g(x) <= 0 at a sampled point");
  if (!(r.max_G_minus_cbar < 0.0)) r.violations.push_back("G(x) >= c_bar at an interior point");
  if (!monotone) r.violations.push_back("G is not strictly monotone on a side of 0");
  r.pass = r.violations.empty();
  return r;
}

}  // namespace periodfn
