#pragma once

#include <string_view>
#include <vector>

#include "periodfn/potential.hpp"

namespace periodfn {

struct PeriodSample {
  double c = 0.0;
  double T = 0.0;
  /// Filled by period_table; NaN when the derivative stencil does not fit.
  double dTdc = 0.0;
  double err_estimate = 0.0;
};

/// Finite-difference T'(c) with an error bound. sign() is 0 unless
/// |value| > 3 * error_bound.
struct PeriodDerivative {
  double value = 0.0;
  double error_bound = 0.0;
  int sign() const;
};

enum class MonotoneFlag { increasing, decreasing, constant, mixed };

std::string_view monotone_flag_name(MonotoneFlag f);

struct PeriodTable {
  std::vector<PeriodSample> samples;
  MonotoneFlag flag = MonotoneFlag::mixed;
};

/// T(c) through the substitution G(x) = c sin^2(theta) on each branch, with
/// Gauss-Legendre node doubling to 1e-11 relative. Requires 0 < c < c_bar.
PeriodSample period_at(const Potential& pot, double c);

/// The same quadrature with a fixed number of Gauss-Legendre nodes per branch.
double period_fixed_nodes(const Potential& pot, double c, std::size_t nodes);

/// Central difference, step max(1e-6, 1e-3 c), one Richardson level.
PeriodDerivative period_derivative(const Potential& pot, double c);
double period_derivative_at(const Potential& pot, double c);

/// Geometric grid of `steps` energies from c_min to c_max inclusive.
PeriodTable period_table(const Potential& pot, double c_min, double c_max, int steps);

/// Time for the orbit started at the right turning point to return there,
/// by adaptive Dormand-Prince integration with dense-output event location.
double period_via_ode(const Potential& pot, double c);

}  // namespace periodfn
