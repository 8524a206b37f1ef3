#pragma once

#include <memory>
#include <string>
#include <vector>

#include "periodfn/expr.hpp"
#include "periodfn/series.hpp"

namespace periodfn {

enum class BoundaryKind { g_vanishes, energy_match, search_limit };

std::string_view boundary_kind_name(BoundaryKind k);

/// The well (a, b) around the center and the energy bound c_bar with
/// G(a) = G(b) = c_bar.
struct CenterDomain {
  double a = 0.0;
  double b = 0.0;
  double c_bar = 0.0;
  BoundaryKind left_kind = BoundaryKind::search_limit;
  BoundaryKind right_kind = BoundaryKind::search_limit;
  double search_limit = 0.0;
};

struct HypothesisReport {
  bool pass = false;
  int grid_size = 0;
  /// min over the grid of x g(x) / x^2; must be positive.
  double min_xg_over_x2 = 0.0;
  /// max over interior grid points of G(x) - c_bar; must be negative.
  double max_G_minus_cbar = 0.0;
  std::vector<std::string> violations;
};

inline constexpr double kDefaultSearchLimit = 10.0;
inline constexpr int kPotentialSeriesOrder = 24;

/// A normalized potential g with evaluators for g, g', g'', G and the
/// located center domain. Cheap to copy; immutable and thread-safe.
class Potential {
 public:
  /// Validates g(0) = 0, g'(0) = 1 (HypothesisError otherwise), tabulates G
  /// out to search_limit and locates the center domain.
  static Potential build(const Expression& g, const ParamBinding& params,
                         double search_limit = kDefaultSearchLimit);

  const Expression& expression() const;
  const ParamBinding& params() const;

  double g(double x) const;
  double dg(double x) const;
  double d2g(double x) const;
  /// G(x) = integral of g over [0, x].
  double G(double x) const;

  /// Taylor series of g at 0 (order kPotentialSeriesOrder).
  const PowerSeries& series() const;
  /// Taylor series of the involution A.
  const PowerSeries& involution() const;
  const CenterDomain& domain() const;

  /// Largest |x| on each side reached by the G table (evaluation may stop
  /// early where g fails to evaluate).
  double table_left() const;
  double table_right() const;

  /// x on the given side (sign +1 right, -1 left) with G(x) = c, for
  /// 0 <= c <= c_bar. Optional [lo, hi] narrows the search bracket.
  double energy_preimage(double c, int side) const;
  double energy_preimage(double c, int side, double lo, double hi) const;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
  CenterDomain domain_;

  friend CenterDomain find_center_domain(const Potential& pot, double search_limit);
};

Potential build_potential(const Expression& g, const ParamBinding& params,
                          double search_limit = kDefaultSearchLimit);

/// Locates (a, b): nearest zero of g on each side within the limit, then
/// pulls the higher-energy side back to the matching energy.
CenterDomain find_center_domain(const Potential& pot, double search_limit);

/// A(x): the opposite-sign point with G(A(x)) = G(x). Requires x in [a, b].
double involution_at(const Potential& pot, double x);

/// Root-based A(x) without the series blend near 0.
double involution_root(const Potential& pot, double x);

HypothesisReport check_hypothesis(const Potential& pot, int grid_size);

}  // namespace periodfn
