#pragma once

#include <span>
#include <string>
#include <vector>

namespace periodfn {

/// Truncated Taylor series about 0: coeffs[k] is the x^k coefficient,
/// k = 0..order. All coefficients are finite.
class PowerSeries {
 public:
  explicit PowerSeries(int order = 0);
  explicit PowerSeries(std::vector<double> coeffs);

  static PowerSeries constant(double value, int order);
  /// The identity series x (truncated at `order`, which must be >= 1).
  static PowerSeries identity(int order);

  int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  double operator[](int k) const { return coeffs_.at(static_cast<std::size_t>(k)); }
  std::span<const double> coefficients() const noexcept { return coeffs_; }

  /// Returns a copy truncated (or zero-extended) to `order`.
  PowerSeries with_order(int order) const;
  /// Horner evaluation of the truncated polynomial.
  double evaluate(double x) const;
  /// k-th derivative at 0, i.e. k! * coeffs[k].
  double derivative_at_zero(int k) const;

  PowerSeries operator-() const;
  PowerSeries& operator+=(const PowerSeries& rhs);
  PowerSeries& operator-=(const PowerSeries& rhs);
  PowerSeries& operator*=(double s);

  friend PowerSeries operator+(PowerSeries lhs, const PowerSeries& rhs) { return lhs += rhs; }
  friend PowerSeries operator-(PowerSeries lhs, const PowerSeries& rhs) { return lhs -= rhs; }
  friend PowerSeries operator*(PowerSeries lhs, double s) { return lhs *= s; }
  friend PowerSeries operator*(double s, PowerSeries rhs) { return rhs *= s; }

 private:
  std::vector<double> coeffs_;
};

// Algebra. Binary operations truncate to the smaller operand order.
PowerSeries series_product(const PowerSeries& u, const PowerSeries& v);
PowerSeries series_divide(const PowerSeries& u, const PowerSeries& v);
PowerSeries series_power(const PowerSeries& u, int exponent);
/// u(v(x)); requires v(0) == 0. Result order is min(u.order, v.order).
PowerSeries series_compose(const PowerSeries& u, const PowerSeries& v);
/// Antiderivative vanishing at 0; order grows by one.
PowerSeries series_integrate(const PowerSeries& u);
PowerSeries series_derivative(const PowerSeries& u);
/// Compositional inverse of u, which needs u(0) == 0 and u'(0) != 0.
PowerSeries series_revert(const PowerSeries& u);
/// u / x^m. The dropped coefficients must vanish relative to `tolerance`
/// times the largest retained magnitude; order shrinks by m.
PowerSeries series_shift_down(const PowerSeries& u, int m, double tolerance = 1e-9);

// Elementary functions by the usual first-order recurrences.
PowerSeries series_exp(const PowerSeries& u);
PowerSeries series_log(const PowerSeries& u);
PowerSeries series_sqrt(const PowerSeries& u);
PowerSeries series_sin(const PowerSeries& u);
PowerSeries series_cos(const PowerSeries& u);
PowerSeries series_tan(const PowerSeries& u);
PowerSeries series_sinh(const PowerSeries& u);
PowerSeries series_cosh(const PowerSeries& u);
PowerSeries series_tanh(const PowerSeries& u);

/// Series of the involution A with G(A(x)) = G(x), A'(0) = -1, for a
/// normalized g series (g_0 = 0, g_1 = 1). Result order is gser.order.
PowerSeries involution_series(const PowerSeries& gser);

/// f_n(G) = sum_{k<=n} derivs[k] G^k / k!.
struct CriterionPolynomial {
  int n = 0;
  std::vector<double> derivs;

  double operator()(double G) const;
  /// f_n(G(x)) as a series in x.
  PowerSeries compose(const PowerSeries& Gser) const;
};

struct PrintedVariant {
  std::string source;
  double value;
};

/// Outcome of identifying f from the symmetrized d/dx[G/g^2] together with
/// the closed forms that have been printed for the same coefficients.
struct CriterionCoefficients {
  CriterionPolynomial identified;
  /// printed[k] lists the closed-form values of f^(k)(0). Empty for k
  /// without a closed form.
  std::vector<std::vector<PrintedVariant>> printed;
  /// Odd (in w) residue of the symmetrized function; zero up to rounding.
  double odd_residue = 0.0;
  /// a_3 - (5/3) a_2^2: vanishes exactly when the unsymmetrized limits exist.
  double odd_constraint_residual = 0.0;
};

/// Default working order for n coefficients.
int criterion_working_order(int n);

/// Identifies f^(k)(0), k = 0..n. Requires gser normalized and
/// gser.order() >= 2n + 4. Throws SeriesError otherwise.
CriterionCoefficients extract_criterion_coefficients(const PowerSeries& gser, int n);

/// Closed forms of f^(k)(0) as functions of a_k = g^(k)(0). Labels are
/// "theorem", "appendix" for g''(0) != 0 and "appendix_a2_zero" otherwise.
std::vector<std::vector<PrintedVariant>> printed_closed_forms(const PowerSeries& gser, int n);

/// The resolved convention: printed appendix closed forms for k <= 2 when
/// g''(0) != 0, identification elsewhere.
CriterionPolynomial resolved_polynomial(const PowerSeries& gser, int n);

/// Threshold below which g''(0) is treated as zero.
inline constexpr double kVanishingSecondDerivative = 1e-10;

}  // namespace periodfn
