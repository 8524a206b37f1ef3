#include "periodfn/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

#include "periodfn/errors.hpp"
#include "parallel.hpp"

namespace periodfn {

namespace {

constexpr double kNoiseFactor = 1e-12;
constexpr double kCoefficientZero = 1e-10;
constexpr double kRootTolerance = 1e-12;

std::string fmt_g(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

int strict_sign(double v) { return (v > 0.0) - (v < 0.0); }

// Uniform grid strictly inside (a, b), with (-eps, eps) removed and the
// two window edges added.
std::vector<double> scan_grid(double a, double b, int grid, double eps) {
  std::vector<double> xs;
  xs.reserve(static_cast<std::size_t>(grid) + 2);
  for (int i = 1; i <= grid; ++i) {
    const double x = a + (b - a) * static_cast<double>(i) / (grid + 1);
    if (x == 0.0 || std::abs(x) < eps) continue;
    xs.push_back(x);
  }
  if (eps > 0.0) {
    xs.push_back(-eps);
    xs.push_back(eps);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

double refine_root(const std::function<double(double)>& f, double lo, double hi, double flo,
                   double fhi) {
  std::uintmax_t iters = 200;
  auto tol = [](double u, double v) { return std::abs(u - v) <= kRootTolerance; };
  auto [r0, r1] = boost::math::tools::toms748_solve(f, lo, hi, flo, fhi, tol, iters);
  return 0.5 * (r0 + r1);
}

// Largest eps <= cap with |c_L| eps^L >= 10 * sum_{k>L} |c_k| eps^k.
double dominance_radius(const PowerSeries& k, int lead, double cap) {
  auto dominates = [&](double eps) {
    double tail = 0.0;
    for (int j = lead + 1; j <= k.order(); ++j) tail += std::abs(k[j]) * std::pow(eps, j - lead);
    return std::abs(k[lead]) >= 10.0 * tail;
  };
  if (dominates(cap)) return cap;
  double lo = 0.0;
  double hi = cap;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * cap; ++it) {
    const double mid = 0.5 * (lo + hi);
    (dominates(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

// ----------------------------------------------------------------- K, phi

CriterionEvaluation::CriterionEvaluation(Potential pot, CriterionPolynomial poly)
    : pot_(std::move(pot)), poly_(std::move(poly)) {}

double CriterionEvaluation::K_raw(double x) const {
  const double g = pot_.g(x);
  const double G = pot_.G(x);
  return g * g - 2.0 * G * pot_.dg(x) - poly_(G) * g * g * g;
}

double CriterionEvaluation::noise_floor(double x) const {
  const double g = pot_.g(x);
  const double G = pot_.G(x);
  return kNoiseFactor *
         (g * g + std::abs(2.0 * G * pot_.dg(x)) + std::abs(poly_(G) * g * g * g));
}

double CriterionEvaluation::K(double x) const {
  const double k = K_raw(x);
  return std::abs(k) <= noise_floor(x) ? 0.0 : k;
}

double CriterionEvaluation::phi(double x) const {
  const double g = pot_.g(x);
  return (g * g - 2.0 * pot_.G(x) * pot_.dg(x)) / (g * g * g);
}

PowerSeries CriterionEvaluation::series(int order) const {
  const PowerSeries g = pot_.series().with_order(order);
  const PowerSeries G = series_integrate(g).with_order(order);
  const PowerSeries g2 = series_product(g, g);
  return g2 - 2.0 * series_product(G, series_derivative(pot_.series()).with_order(order)) -
         series_product(poly_.compose(G), series_product(g2, g));
}

double criterion_K(const Potential& pot, const CriterionPolynomial& poly, double x) {
  return CriterionEvaluation(pot, poly).K(x);
}

// ------------------------------------------------------------ names

std::string_view sign_name(Sign s) {
  switch (s) {
    case Sign::positive:
      return "positive";
    case Sign::negative:
      return "negative";
    case Sign::zero:
      return "zero";
    case Sign::alternating:
      return "alternating";
  }
  return "?";
}

std::string_view overall_name(Overall o) {
  switch (o) {
    case Overall::positive_on_domain:
      return "positive_on_domain";
    case Overall::negative_on_domain:
      return "negative_on_domain";
    case Overall::mixed:
      return "mixed";
    case Overall::vanishing:
      return "vanishing";
  }
  return "?";
}

std::string_view cn_status_name(CnStatus s) {
  switch (s) {
    case CnStatus::holds_positive:
      return "holds_positive";
    case CnStatus::holds_negative:
      return "holds_negative";
    case CnStatus::fails:
      return "fails";
  }
  return "?";
}

std::string_view direction_name(Direction d) {
  switch (d) {
    case Direction::increasing:
      return "increasing";
    case Direction::decreasing:
      return "decreasing";
    case Direction::inconclusive:
      return "inconclusive";
  }
  return "?";
}

std::string_view uniform_sign_name(UniformSign s) {
  switch (s) {
    case UniformSign::positive:
      return "positive";
    case UniformSign::negative:
      return "negative";
    case UniformSign::mixed:
      return "mixed";
    case UniformSign::zero:
      return "zero";
  }
  return "?";
}

std::string witness_label(const Witness& w) {
  switch (w.kind) {
    case Witness::Kind::none:
      return "none";
    case Witness::Kind::criterion:
      return "C" + std::to_string(w.n) + (w.restricted ? " (restricted)" : "");
    case Witness::Kind::opial_chain:
      return "opial_chain(" + w.condition + ")";
  }
  return "?";
}

// ------------------------------------------------------------ sign scan

SignReport sign_scan(const Potential& pot, const CriterionPolynomial& poly, int grid) {
  if (grid < 1000) throw NumericError("sign scan grid must be at least 1000");
  const CriterionEvaluation eval(pot, poly);
  const CenterDomain& d = pot.domain();

  SignReport r;
  r.n = poly.n;
  r.grid = grid;

  // Near 0 the sign comes from the series; floating evaluation there is
  // dominated by cancellation.
  const int order = criterion_working_order(poly.n);
  const PowerSeries ks = eval.series(order);
  {
    const PowerSeries g = pot.series().with_order(order);
    const PowerSeries G = series_integrate(g).with_order(order);
    const PowerSeries g2 = series_product(g, g);
    const PowerSeries t1 = series_product(G, series_derivative(pot.series()).with_order(order));
    const PowerSeries t2 = series_product(poly.compose(G), series_product(g2, g));
    for (int k = 0; k <= order; ++k) {
      const double scale = std::abs(g2[k]) + 2.0 * std::abs(t1[k]) + std::abs(t2[k]);
      if (std::abs(ks[k]) > kCoefficientZero * std::max(scale, 1e-300)) {
        r.leading_order = k;
        r.leading_coefficient = ks[k];
        break;
      }
    }
  }
  if (r.leading_order >= 0) {
    if (r.leading_order % 2 == 1) {
      r.sign_near_zero = Sign::alternating;
    } else {
      r.sign_near_zero = r.leading_coefficient > 0.0 ? Sign::positive : Sign::negative;
    }
    const double cap = 0.1 * std::min(-d.a, d.b);
    r.epsilon = dominance_radius(ks, r.leading_order, cap);
  }

  const std::vector<double> xs = scan_grid(d.a, d.b, grid, r.epsilon);
  std::vector<double> values(xs.size());
  std::vector<int> signs(xs.size());
  detail::parallel_for(xs.size(), [&](std::size_t i) {
    values[i] = eval.K_raw(xs[i]);
    signs[i] = std::abs(values[i]) <= eval.noise_floor(xs[i]) ? 0 : strict_sign(values[i]);
  });
  if (r.epsilon > 0.0) {
    const int right = r.leading_coefficient > 0.0 ? 1 : -1;
    const int left = r.leading_order % 2 == 0 ? right : -right;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (xs[i] == r.epsilon && signs[i] == 0) signs[i] = right;
      if (xs[i] == -r.epsilon && signs[i] == 0) signs[i] = left;
    }
  }

  // Brackets between consecutive nonzero samples of opposite sign. The gap
  // (-eps, eps) is not a bracket: the series decides the sign change there.
  std::function<double(double)> f = [&eval](double x) { return eval.K_raw(x); };
  std::size_t last = xs.size();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (signs[i] == 0) continue;
    if (last != xs.size() && signs[last] != signs[i]) {
      const bool spans_window = xs[last] < 0.0 && xs[i] > 0.0;
      if (!spans_window) {
        double flo = values[last];
        double fhi = values[i];
        if (strict_sign(flo) == strict_sign(fhi) || flo == 0.0 || fhi == 0.0) {
          r.roots.push_back(0.5 * (xs[last] + xs[i]));
        } else {
          r.roots.push_back(refine_root(f, xs[last], xs[i], flo, fhi));
        }
      }
    }
    last = i;
  }

  const bool any_signed = std::any_of(signs.begin(), signs.end(), [](int s) { return s != 0; });
  const bool all_pos = any_signed && std::all_of(signs.begin(), signs.end(), [](int s) {
                         return s >= 0;
                       });
  const bool all_neg = any_signed && std::all_of(signs.begin(), signs.end(), [](int s) {
                         return s <= 0;
                       });
  if (r.sign_near_zero == Sign::positive && r.roots.empty() && all_pos) {
    r.overall = Overall::positive_on_domain;
  } else if (r.sign_near_zero == Sign::negative && r.roots.empty() && all_neg) {
    r.overall = Overall::negative_on_domain;
  } else if (r.sign_near_zero == Sign::zero && !any_signed) {
    r.overall = Overall::vanishing;
  } else {
    r.overall = Overall::mixed;
  }

  if (r.sign_near_zero == Sign::positive || r.sign_near_zero == Sign::negative) {
    r.definite_lo = d.a;
    r.definite_hi = d.b;
    for (double root : r.roots) {
      if (root < 0.0) r.definite_lo = std::max(r.definite_lo, root);
      if (root > 0.0) r.definite_hi = std::min(r.definite_hi, root);
    }
  }
  return r;
}

// ------------------------------------------------------------ C_n

CriterionPolynomial criterion_polynomial(const Potential& pot, int n, CoefficientPolicy policy) {
  if (n < 0 || n > 4) throw NumericError("criterion index must be in 0..4");
  if (policy == CoefficientPolicy::resolved) return resolved_polynomial(pot.series(), n);
  return extract_criterion_coefficients(pot.series(), n).identified;
}

CnResult check_Cn(const Potential& pot, int n, CoefficientPolicy policy, int grid) {
  CnResult out;
  out.n = n;
  out.poly = criterion_polynomial(pot, n, policy);
  out.report = sign_scan(pot, out.poly, grid);
  switch (out.report.overall) {
    case Overall::positive_on_domain:
      out.status = CnStatus::holds_positive;
      break;
    case Overall::negative_on_domain:
      out.status = CnStatus::holds_negative;
      break;
    default:
      out.status = CnStatus::fails;
      break;
  }
  const SignReport& r = out.report;
  if (out.status != CnStatus::fails) {
    out.restricted_sign = r.sign_near_zero;
    out.c_valid = pot.domain().c_bar;
  } else if ((r.sign_near_zero == Sign::positive || r.sign_near_zero == Sign::negative) &&
             r.definite_lo < 0.0 && r.definite_hi > 0.0) {
    out.restricted_sign = r.sign_near_zero;
    out.c_valid = std::min(pot.G(r.definite_lo), pot.G(r.definite_hi));
  }
  return out;
}

// ------------------------------------------------------------ Opial chain

OpialReport opial_chain_report(const Potential& pot, int grid) {
  if (grid < 1000) throw NumericError("opial chain grid must be at least 1000");
  OpialReport rep;
  rep.grid = grid;
  rep.g2_at_zero = pot.series().derivative_at_zero(2);
  rep.g4_at_zero = pot.series().derivative_at_zero(4);
  rep.g2_vanishes = std::abs(rep.g2_at_zero) <= kVanishingSecondDerivative;
  rep.proposition_applicable = rep.g2_vanishes && rep.g4_at_zero < 0.0;

  const CenterDomain& d = pot.domain();
  const std::vector<double> xs = scan_grid(d.a, d.b, grid, 0.0);
  // Values and noise floors of the three quantities at each grid point.
  std::vector<std::array<double, 3>> q(xs.size());
  std::vector<std::array<double, 3>> floor(xs.size());
  detail::parallel_for(xs.size(), [&](std::size_t i) {
    const double x = xs[i];
    const double g = pot.g(x);
    const double dg = pot.dg(x);
    const double G = pot.G(x);
    const double d2g = pot.d2g(x);
    q[i] = {x * d2g, g * g - 2.0 * G * dg, (x * dg - g) / x};
    floor[i] = {kNoiseFactor * std::abs(x * d2g), kNoiseFactor * (g * g + std::abs(2.0 * G * dg)),
                kNoiseFactor * (std::abs(dg) + std::abs(g / x))};
  });

  const std::array<const char*, 3> names{"x*g''", "g^2-2*G*g'", "x*(g/x)'"};
  // Sign of each quantity that implies an increasing period.
  const std::array<int, 3> increasing_sign{-1, +1, -1};
  for (std::size_t j = 0; j < 3; ++j) {
    ChainQuantity& cq = rep.quantities[j];
    cq.name = names[j];
    cq.min = std::numeric_limits<double>::infinity();
    cq.max = -std::numeric_limits<double>::infinity();
    bool pos = false;
    bool neg = false;
    bool zero = false;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double v = q[i][j];
      cq.min = std::min(cq.min, v);
      cq.max = std::max(cq.max, v);
      if (std::abs(v) <= floor[i][j]) {
        zero = true;
      } else if (v > 0.0) {
        pos = true;
      } else {
        neg = true;
      }
    }
    if (pos && neg) {
      cq.sign = UniformSign::mixed;
    } else if (pos && !zero) {
      cq.sign = UniformSign::positive;
    } else if (neg && !zero) {
      cq.sign = UniformSign::negative;
    } else if (!pos && !neg) {
      cq.sign = UniformSign::zero;
    } else {
      cq.sign = UniformSign::mixed;
    }
    if (cq.sign == UniformSign::positive) {
      cq.implies = increasing_sign[j] > 0 ? Direction::increasing : Direction::decreasing;
    } else if (cq.sign == UniformSign::negative) {
      cq.implies = increasing_sign[j] < 0 ? Direction::increasing : Direction::decreasing;
    }
  }
  return rep;
}

// ------------------------------------------------------------ verdict

MonotonicityVerdict monotonicity_verdict(const Potential& pot, int max_n, CoefficientPolicy policy,
                                         int grid) {
  if (max_n < 0 || max_n > 4) throw NumericError("max_n must be in 0..4");
  MonotonicityVerdict v;
  v.opial = opial_chain_report(pot, grid);
  v.coefficients = extract_criterion_coefficients(pot.series(), max_n);
  for (int n = 0; n <= max_n; ++n) v.criteria.push_back(check_Cn(pot, n, policy, grid));

  const CenterDomain& d = pot.domain();

  // Status of each criterion.
  for (const CnResult& c : v.criteria) {
    std::string note = "C" + std::to_string(c.n) + " " + std::string(cn_status_name(c.status));
    if (c.status == CnStatus::fails && c.restricted_sign != Sign::zero) {
      note += "; " + std::string(sign_name(c.restricted_sign)) + " on [" +
              fmt_g(c.report.definite_lo) + ", " + fmt_g(c.report.definite_hi) +
              "], c_valid = " + fmt_g(c.c_valid);
    }
    v.notes.push_back(note);
  }

  // Nesting: f^(k)(0) < 0 should carry C_(k-1) over to C_k.
  const CriterionPolynomial& top = v.criteria.back().poly;
  for (int k = 1; k <= max_n; ++k) {
    const double fk = top.derivs[static_cast<std::size_t>(k)];
    std::string note = "nesting: f^(" + std::to_string(k) + ")(0) = " + fmt_g(fk);
    const CnResult& prev = v.criteria[static_cast<std::size_t>(k - 1)];
    const CnResult& cur = v.criteria[static_cast<std::size_t>(k)];
    if (fk < 0.0 && prev.status != CnStatus::fails) {
      note += cur.status == prev.status ? "; C" + std::to_string(k - 1) + " carried over to C" +
                                              std::to_string(k)
                                        : "; C" + std::to_string(k - 1) + " held but C" +
                                              std::to_string(k) + " did not";
    }
    v.notes.push_back(note);
  }

  // Printed closed forms against identification.
  for (std::size_t k = 0; k < v.coefficients.printed.size(); ++k) {
    const double id = v.coefficients.identified.derivs[k];
    for (const PrintedVariant& pv : v.coefficients.printed[k]) {
      const double rel = std::abs(pv.value - id) / std::max(std::abs(id), 1e-300);
      const bool match = rel <= 1e-8 || std::abs(pv.value - id) <= 1e-12;
      v.notes.push_back("coefficient f^(" + std::to_string(k) + ")(0): " + pv.source + " " +
                        fmt_g(pv.value) + " vs identified " + fmt_g(id) +
                        (match ? " (consistent)" : " (inconsistent)"));
    }
  }
  if (std::abs(v.coefficients.odd_constraint_residual) > 1e-10) {
    v.notes.push_back("g'''(0) - (5/3) g''(0)^2 = " +
                      fmt_g(v.coefficients.odd_constraint_residual) +
                      ": printed closed forms assume this vanishes");
  }

  const bool all_vanish = std::all_of(v.criteria.begin(), v.criteria.end(), [](const CnResult& c) {
    return c.report.overall == Overall::vanishing;
  });
  if (all_vanish) {
    v.notes.push_back("all K ≡ 0 (isochronous candidate)");
    return v;
  }

  // Chain first when g''(0) = 0.
  if (v.opial.g2_vanishes) {
    for (const ChainQuantity& q : v.opial.quantities) {
      if (q.implies != Direction::inconclusive) {
        v.direction = q.implies;
        v.witness = {Witness::Kind::opial_chain, -1, q.name, false};
        v.c_valid = d.c_bar;
        return v;
      }
    }
  }

  for (const CnResult& c : v.criteria) {
    if (c.status == CnStatus::fails) continue;
    v.direction =
        c.status == CnStatus::holds_positive ? Direction::increasing : Direction::decreasing;
    v.witness = {Witness::Kind::criterion, c.n, {}, false};
    v.c_valid = d.c_bar;
    return v;
  }

  // Restricted witnesses: the one covering the most energy, lowest n on ties.
  const CnResult* best = nullptr;
  bool conflict = false;
  for (const CnResult& c : v.criteria) {
    if (c.restricted_sign != Sign::positive && c.restricted_sign != Sign::negative) continue;
    if (best != nullptr && best->restricted_sign != c.restricted_sign) conflict = true;
    if (best == nullptr || c.c_valid > best->c_valid) best = &c;
  }
  if (conflict) {
    v.notes.push_back("restricted criteria disagree on the sign near 0");
    return v;
  }
  if (best != nullptr && best->c_valid > 0.0) {
    v.direction =
        best->restricted_sign == Sign::positive ? Direction::increasing : Direction::decreasing;
    v.witness = {Witness::Kind::criterion, best->n, {}, true};
    v.c_valid = best->c_valid;
    v.notes.push_back("restricted verdict: valid only for 0 < c <= " + fmt_g(v.c_valid) +
                      " (c_bar = " + fmt_g(d.c_bar) + ")");
  }
  return v;
}

}  // namespace periodfn
