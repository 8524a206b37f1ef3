#include "periodfn/series.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "periodfn/errors.hpp"

namespace periodfn {
namespace {

void require_finite(const std::vector<double>& c) {
  for (double v : c) {
    if (!std::isfinite(v)) throw SeriesError("power series coefficient is not finite");
  }
}

int common_order(const PowerSeries& u, const PowerSeries& v) {
  return std::min(u.order(), v.order());
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Shared recurrence for (s, c) = (sin u, cos u) when sign = -1 and
// (sinh u, cosh u) when sign = +1:
//   s_k = (1/k) sum j u_j c_{k-j},  c_k = sign (1/k) sum j u_j s_{k-j}.
void trig_pair(const PowerSeries& u, double s0, double c0, double sign, std::vector<double>& s,
               std::vector<double>& c) {
  const int n = u.order();
  s.assign(n + 1, 0.0);
  c.assign(n + 1, 0.0);
  s[0] = s0;
  c[0] = c0;
  for (int k = 1; k <= n; ++k) {
    double ss = 0.0, cc = 0.0;
    for (int j = 1; j <= k; ++j) {
      ss += j * u[j] * c[k - j];
      cc += j * u[j] * s[k - j];
    }
    s[k] = ss / k;
    c[k] = sign * cc / k;
  }
}

}  // namespace

PowerSeries::PowerSeries(int order) {
  if (order < 0) throw SeriesError("power series order must be non-negative");
  coeffs_.assign(static_cast<std::size_t>(order) + 1, 0.0);
}

PowerSeries::PowerSeries(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) coeffs_.push_back(0.0);
  require_finite(coeffs_);
}

PowerSeries PowerSeries::constant(double value, int order) {
  PowerSeries s(order);
  s.coeffs_[0] = value;
  require_finite(s.coeffs_);
  return s;
}

PowerSeries PowerSeries::identity(int order) {
  if (order < 1) throw SeriesError("identity series needs order >= 1");
  PowerSeries s(order);
  s.coeffs_[1] = 1.0;
  return s;
}

PowerSeries PowerSeries::with_order(int order) const {
  std::vector<double> c(coeffs_);
  c.resize(static_cast<std::size_t>(order) + 1, 0.0);
  return PowerSeries(std::move(c));
}

double PowerSeries::evaluate(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double PowerSeries::derivative_at_zero(int k) const { return factorial(k) * (*this)[k]; }

PowerSeries PowerSeries::operator-() const {
  PowerSeries r(*this);
  for (double& c : r.coeffs_) c = -c;
  return r;
}

PowerSeries& PowerSeries::operator+=(const PowerSeries& rhs) {
  const int n = common_order(*this, rhs);
  coeffs_.resize(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) coeffs_[k] += rhs[k];
  return *this;
}

PowerSeries& PowerSeries::operator-=(const PowerSeries& rhs) {
  const int n = common_order(*this, rhs);
  coeffs_.resize(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) coeffs_[k] -= rhs[k];
  return *this;
}

PowerSeries& PowerSeries::operator*=(double s) {
  for (double& c : coeffs_) c *= s;
  require_finite(coeffs_);
  return *this;
}

PowerSeries series_product(const PowerSeries& u, const PowerSeries& v) {
  const int n = common_order(u, v);
  std::vector<double> r(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 0; k <= n; ++k) {
    double acc = 0.0;
    for (int i = 0; i <= k; ++i) acc += u[i] * v[k - i];
    r[k] = acc;
  }
  return PowerSeries(std::move(r));
}

PowerSeries series_divide(const PowerSeries& u, const PowerSeries& v) {
  if (v[0] == 0.0) throw SeriesError("division by a series with zero constant term");
  const int n = common_order(u, v);
  std::vector<double> q(static_cast<std::size_t>(n) + 1, 0.0);
  for (int k = 0; k <= n; ++k) {
    double acc = u[k];
    for (int i = 0; i < k; ++i) acc -= q[i] * v[k - i];
    q[k] = acc / v[0];
  }
  return PowerSeries(std::move(q));
}

PowerSeries series_power(const PowerSeries& u, int exponent) {
  if (exponent < 0) {
    return series_divide(PowerSeries::constant(1.0, u.order()), series_power(u, -exponent));
  }
  PowerSeries result = PowerSeries::constant(1.0, u.order());
  PowerSeries base = u;
  unsigned e = static_cast<unsigned>(exponent);
  while (e != 0) {
    if (e & 1u) result = series_product(result, base);
    e >>= 1;
    if (e != 0) base = series_product(base, base);
  }
  return result;
}

PowerSeries series_compose(const PowerSeries& u, const PowerSeries& v) {
  if (v[0] != 0.0) throw SeriesError("composition requires an inner series with zero constant term");
  const int n = common_order(u, v);
  const PowerSeries inner = v.with_order(n);
  PowerSeries acc = PowerSeries::constant(u[n], n);
  for (int k = n - 1; k >= 0; --k) {
    acc = series_product(acc, inner);
    acc += PowerSeries::constant(u[k], n);
  }
  return acc;
}

PowerSeries series_integrate(const PowerSeries& u) {
  std::vector<double> r(static_cast<std::size_t>(u.order()) + 2, 0.0);
  for (int k = 0; k <= u.order(); ++k) r[k + 1] = u[k] / (k + 1);
  return PowerSeries(std::move(r));
}

PowerSeries series_derivative(const PowerSeries& u) {
  if (u.order() == 0) return PowerSeries(0);
  std::vector<double> r(static_cast<std::size_t>(u.order()), 0.0);
  for (int k = 1; k <= u.order(); ++k) r[k - 1] = k * u[k];
  return PowerSeries(std::move(r));
}

PowerSeries series_revert(const PowerSeries& u) {
  if (u[0] != 0.0) throw SeriesError("reversion requires zero constant term");
  if (u.order() < 1 || u[1] == 0.0) throw SeriesError("reversion requires a nonzero linear term");
  const int n = u.order();
  // Order by order: with r_1 = 1/u_1, the x^k coefficient of u(r(x)) is
  // u_1 r_k + (terms in r_1..r_{k-1}), so each step fixes one unknown.
  std::vector<double> r(static_cast<std::size_t>(n) + 1, 0.0);
  r[1] = 1.0 / u[1];
  for (int k = 2; k <= n; ++k) {
    const PowerSeries trial = series_compose(u, PowerSeries(r).with_order(k));
    r[k] = -trial[k] / u[1];
  }
  return PowerSeries(std::move(r));
}

PowerSeries series_shift_down(const PowerSeries& u, int m, double tolerance) {
  if (m < 0 || m > u.order()) throw SeriesError("shift exceeds series order");
  double scale = 0.0;
  for (int k = m; k <= u.order(); ++k) scale = std::max(scale, std::abs(u[k]));
  for (int k = 0; k < m; ++k) {
    if (std::abs(u[k]) > tolerance * std::max(scale, 1.0)) {
      throw SeriesError("series does not vanish to order " + std::to_string(m) + " at 0");
    }
  }
  std::vector<double> r(u.coefficients().begin() + m, u.coefficients().end());
  return PowerSeries(std::move(r));
}

PowerSeries series_exp(const PowerSeries& u) {
  const int n = u.order();
  std::vector<double> e(static_cast<std::size_t>(n) + 1, 0.0);
  e[0] = std::exp(u[0]);
  for (int k = 1; k <= n; ++k) {
    double acc = 0.0;
    for (int j = 1; j <= k; ++j) acc += j * u[j] * e[k - j];
    e[k] = acc / k;
  }
  return PowerSeries(std::move(e));
}

PowerSeries series_log(const PowerSeries& u) {
  if (!(u[0] > 0.0)) throw SeriesError("ln is not analytic at a non-positive argument");
  const int n = u.order();
  std::vector<double> l(static_cast<std::size_t>(n) + 1, 0.0);
  l[0] = std::log(u[0]);
  for (int k = 1; k <= n; ++k) {
    double acc = 0.0;
    for (int j = 1; j < k; ++j) acc += j * l[j] * u[k - j];
    l[k] = (u[k] - acc / k) / u[0];
  }
  return PowerSeries(std::move(l));
}

PowerSeries series_sqrt(const PowerSeries& u) {
  if (!(u[0] > 0.0)) throw SeriesError("sqrt is not analytic at a non-positive argument");
  const int n = u.order();
  std::vector<double> r(static_cast<std::size_t>(n) + 1, 0.0);
  r[0] = std::sqrt(u[0]);
  for (int k = 1; k <= n; ++k) {
    double acc = u[k];
    for (int j = 1; j < k; ++j) acc -= r[j] * r[k - j];
    r[k] = acc / (2.0 * r[0]);
  }
  return PowerSeries(std::move(r));
}

PowerSeries series_sin(const PowerSeries& u) {
  std::vector<double> s, c;
  trig_pair(u, std::sin(u[0]), std::cos(u[0]), -1.0, s, c);
  return PowerSeries(std::move(s));
}

PowerSeries series_cos(const PowerSeries& u) {
  std::vector<double> s, c;
  trig_pair(u, std::sin(u[0]), std::cos(u[0]), -1.0, s, c);
  return PowerSeries(std::move(c));
}

PowerSeries series_tan(const PowerSeries& u) {
  std::vector<double> s, c;
  trig_pair(u, std::sin(u[0]), std::cos(u[0]), -1.0, s, c);
  return series_divide(PowerSeries(std::move(s)), PowerSeries(std::move(c)));
}

PowerSeries series_sinh(const PowerSeries& u) {
  std::vector<double> s, c;
  trig_pair(u, std::sinh(u[0]), std::cosh(u[0]), 1.0, s, c);
  return PowerSeries(std::move(s));
}

PowerSeries series_cosh(const PowerSeries& u) {
  std::vector<double> s, c;
  trig_pair(u, std::sinh(u[0]), std::cosh(u[0]), 1.0, s, c);
  return PowerSeries(std::move(c));
}

PowerSeries series_tanh(const PowerSeries& u) {
  std::vector<double> s, c;
  trig_pair(u, std::sinh(u[0]), std::cosh(u[0]), 1.0, s, c);
  return series_divide(PowerSeries(std::move(s)), PowerSeries(std::move(c)));
}

namespace {

void require_normalized(const PowerSeries& gser) {
  if (gser.order() < 2) throw SeriesError("g series must have order >= 2");
  if (std::abs(gser[0]) > 1e-12 || std::abs(gser[1] - 1.0) > 1e-9) {
    throw SeriesError("g series is not normalized (need g(0) = 0, g'(0) = 1)");
  }
}

PowerSeries zero_constant(const PowerSeries& u) {
  std::vector<double> c(u.coefficients().begin(), u.coefficients().end());
  c[0] = 0.0;
  return PowerSeries(std::move(c));
}

// h(x) = sign(x) sqrt(2 G(x)) as a series; G = h^2 / 2 and h'(0) = 1.
PowerSeries energy_coordinate(const PowerSeries& gser) {
  const PowerSeries G = series_integrate(gser);
  if (G[2] <= 0.0) throw SeriesError("reversion failed: G has no positive quadratic term");
  const PowerSeries root = series_sqrt(series_shift_down(G, 2, 1e-12) * 2.0);
  std::vector<double> h(static_cast<std::size_t>(root.order()) + 2, 0.0);
  for (int k = 0; k <= root.order(); ++k) h[k + 1] = root[k];
  return PowerSeries(std::move(h));
}

}  // namespace

PowerSeries involution_series(const PowerSeries& gser) {
  require_normalized(gser);
  // G(A) = G(x) with opposite signs means h(A(x)) = -h(x).
  const PowerSeries h = energy_coordinate(zero_constant(gser));
  return series_compose(series_revert(h), -h);
}

double CriterionPolynomial::operator()(double G) const {
  double acc = 0.0;
  for (int k = static_cast<int>(derivs.size()) - 1; k >= 0; --k) {
    acc = acc * G / (k + 1) + derivs[k];
  }
  return acc;
}

PowerSeries CriterionPolynomial::compose(const PowerSeries& Gser) const {
  std::vector<double> c(derivs.size());
  for (std::size_t k = 0; k < derivs.size(); ++k) c[k] = derivs[k] / factorial(static_cast<int>(k));
  PowerSeries poly(std::move(c));
  // Pad so the composition keeps the full order of G.
  return series_compose(poly.with_order(Gser.order()), Gser);
}

int criterion_working_order(int n) { return 2 * n + 8; }

std::vector<std::vector<PrintedVariant>> printed_closed_forms(const PowerSeries& gser, int n) {
  auto a = [&](int k) { return k <= gser.order() ? gser.derivative_at_zero(k) : std::nan(""); };
  std::vector<std::vector<PrintedVariant>> out(static_cast<std::size_t>(n) + 1);
  const double a2 = a(2);
  out[0] = {{"theorem", -a2 / 3.0}, {"appendix", -a2 / 3.0}};
  if (std::abs(a2) > kVanishingSecondDerivative) {
    const double a4 = a(4), a6 = a(6);
    if (n >= 1) {
      out[1] = {{"theorem", -7.0 / 9.0 * a2 * a2 * a2 + a4 / 5.0},
                {"appendix", 7.0 / 9.0 * a2 * a2 * a2 - a4 / 5.0}};
    }
    if (n >= 2) {
      const double p = 28550.0 * std::pow(a2, 6) - 10320.0 * a2 * a2 * a2 * a4 + 81.0 * a4 * a4 +
                       270.0 * a2 * a6;
      out[2] = {{"theorem", -p / (4050.0 * a2)}, {"appendix", -p / (2025.0 * a2)}};
    }
  } else {
    if (n >= 1) out[1] = {{"theorem", -a(4) / 5.0}, {"appendix_a2_zero", -a(4) / 5.0}};
    if (n >= 2) out[2] = {{"theorem", -a(6) / 42.0}, {"appendix_a2_zero", -a(6) / 42.0}};
    if (n >= 3) out[3] = {{"appendix_a2_zero", -a(8) / 810.0}};
    if (n >= 4) {
      out[4] = {{"appendix_a2_zero", -a(10) / 27720.0 + 13.0 / 600.0 * std::pow(a(4), 3)}};
    }
  }
  for (auto& row : out) {
    std::erase_if(row, [](const PrintedVariant& v) { return !std::isfinite(v.value); });
  }
  return out;
}

CriterionCoefficients extract_criterion_coefficients(const PowerSeries& gser_in, int n) {
  if (n < 0) throw SeriesError("coefficient count must be non-negative");
  require_normalized(gser_in);
  if (gser_in.order() < 2 * n + 4) {
    throw SeriesError("insufficient series order: need " + std::to_string(2 * n + 4) + ", have " +
                      std::to_string(gser_in.order()));
  }
  const PowerSeries g = zero_constant(gser_in);
  const int order = g.order();

  const PowerSeries G = series_integrate(g).with_order(order);
  const PowerSeries dg = series_derivative(g);
  const PowerSeries numerator = series_product(g, g) - 2.0 * series_product(G, dg);
  const PowerSeries cube = series_product(g, series_product(g, g));
  // phi = (g^2 - 2 G g') / g^3 with the common x^3 removed.
  const PowerSeries phi =
      series_divide(series_shift_down(numerator, 3), series_shift_down(cube, 3, 1e-12));

  const PowerSeries A = involution_series(g);
  const PowerSeries psi = 0.5 * (phi + series_compose(phi, A.with_order(phi.order())));

  const PowerSeries w_to_x = series_revert(energy_coordinate(g));
  const PowerSeries psi_w = series_compose(psi, w_to_x.with_order(psi.order()));

  CriterionCoefficients out;
  out.identified.n = n;
  out.identified.derivs.resize(static_cast<std::size_t>(n) + 1);
  // G = w^2 / 2, so w^(2k) = 2^k G^k.
  for (int k = 0; k <= n; ++k) {
    out.identified.derivs[k] = psi_w[2 * k] * std::ldexp(1.0, k) * factorial(k);
  }
  for (int k = 1; k <= std::min(2 * n + 1, psi_w.order()); k += 2) {
    out.odd_residue = std::max(out.odd_residue, std::abs(psi_w[k]));
  }
  out.odd_constraint_residual = g.derivative_at_zero(3) - 5.0 / 3.0 * std::pow(g.derivative_at_zero(2), 2);
  out.printed = printed_closed_forms(g, n);
  return out;
}

CriterionPolynomial resolved_polynomial(const PowerSeries& gser, int n) {
  CriterionPolynomial poly = extract_criterion_coefficients(gser, n).identified;
  const double a2 = gser.derivative_at_zero(2);
  if (std::abs(a2) > kVanishingSecondDerivative) {
    const auto printed = printed_closed_forms(gser, std::min(n, 2));
    for (int k = 0; k <= std::min(n, 2); ++k) {
      for (const auto& v : printed[k]) {
        if (v.source == "appendix") poly.derivs[k] = v.value;
      }
    }
  }
  return poly;
}

}  // namespace periodfn
