#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "periodfn/criteria.hpp"
#include "periodfn/expr.hpp"
#include "periodfn/potential.hpp"

namespace periodfn::example {

/// g_s(x) = ((x+s)/2 sinh(2x) - (cosh(2x)-1)/4) / s.
inline constexpr std::string_view kGsExpression = "(((x+s)/2)*sinh(2*x)-(cosh(2*x)-1)/4)/s";
inline constexpr double kReferenceS = 0.647;

Expression gs_expression();
ParamBinding gs_params(double s = kReferenceS);
Potential gs_potential(double s = kReferenceS, double search_limit = kDefaultSearchLimit);

/// Published root of K_n for g_s at s = 0.647, with the bracket it was
/// searched in.
struct ReferenceRoot {
  int n;
  double value;
  double lo;
  double hi;
};

std::vector<ReferenceRoot> reference_roots();

/// Every printed value of f'(0) and f''(0) for g_s at parameter s,
/// including the numeric lines written out for this example.
std::vector<PrintedVariant> printed_f1(double s);
std::vector<PrintedVariant> printed_f2(double s);

/// The root of `report` inside [lo, hi] closest to `target`; NaN if none.
double matching_root(const SignReport& report, double target, double lo, double hi);

struct VariantCombination {
  std::string f1_source;
  std::string f2_source;
  double f1 = 0.0;
  double f2 = 0.0;
  /// |root - reference| for the n = 1 root and the larger of the two n = 2
  /// deviations; infinity when no root lies in the reference bracket.
  double n1_deviation = 0.0;
  double n2_deviation = 0.0;
};

struct VariantResolution {
  double tolerance = 0.0;
  std::vector<VariantCombination> combinations;
  /// Variants appearing in a combination whose n = 2 roots are within
  /// tolerance. The n = 2 pair is the only reference output that depends on
  /// both coefficients.
  std::vector<std::string> consistent_f1;
  std::vector<std::string> consistent_f2;
  /// Smallest n = 1 root deviation over all f'(0) variants.
  double best_n1_deviation = 0.0;
};

inline constexpr double kDiscriminationTolerance = 1e-6;

/// Scores every (f'(0), f''(0)) pair by how well K_1 and K_2 reproduce the
/// reference roots.
VariantResolution resolve_printed_variants(const Potential& gs, double s = kReferenceS,
                                           int grid = kDefaultScanGrid,
                                           double tolerance = kDiscriminationTolerance);

}  // namespace periodfn::example
