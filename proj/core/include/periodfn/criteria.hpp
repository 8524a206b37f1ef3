#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "periodfn/potential.hpp"
#include "periodfn/series.hpp"

namespace periodfn {

/// K(x) = g^2 - 2 G g' - f_n(G) g^3 and phi(x) = (g^2 - 2 G g') / g^3 for a
/// fixed potential and criterion polynomial.
class CriterionEvaluation {
 public:
  CriterionEvaluation(Potential pot, CriterionPolynomial poly);

  int n() const { return poly_.n; }
  const CriterionPolynomial& poly() const { return poly_; }
  const Potential& potential() const { return pot_; }

  /// Values below noise_floor(x) are returned as exactly 0.
  double K(double x) const;
  double K_raw(double x) const;
  /// 1e-12 times the sum of the magnitudes of the three terms of K.
  double noise_floor(double x) const;
  double phi(double x) const;

  /// Taylor series of K at 0 through `order`.
  PowerSeries series(int order) const;

 private:
  Potential pot_;
  CriterionPolynomial poly_;
};

double criterion_K(const Potential& pot, const CriterionPolynomial& poly, double x);

enum class Sign { positive, negative, zero, alternating };
enum class Overall { positive_on_domain, negative_on_domain, mixed, vanishing };

std::string_view sign_name(Sign s);
std::string_view overall_name(Overall o);

struct SignReport {
  int n = 0;
  /// Sign changes of K in (a, b), ascending.
  std::vector<double> roots;
  /// From the leading nonzero Taylor coefficient of K. `alternating` when
  /// the leading power is odd; `zero` when no coefficient through the
  /// working order is distinguishable from 0.
  Sign sign_near_zero = Sign::zero;
  int leading_order = -1;
  double leading_coefficient = 0.0;
  /// Half-width of the excluded window around 0 where the leading term
  /// decides the sign.
  double epsilon = 0.0;
  /// Largest interval around 0 on which K has one strict sign.
  double definite_lo = 0.0;
  double definite_hi = 0.0;
  Overall overall = Overall::mixed;
  int grid = 0;
};

inline constexpr int kDefaultScanGrid = 4000;

SignReport sign_scan(const Potential& pot, const CriterionPolynomial& poly,
                     int grid = kDefaultScanGrid);

enum class CoefficientPolicy { resolved, identified };

CriterionPolynomial criterion_polynomial(const Potential& pot, int n,
                                         CoefficientPolicy policy = CoefficientPolicy::resolved);

enum class CnStatus { holds_positive, holds_negative, fails };

std::string_view cn_status_name(CnStatus s);

struct CnResult {
  int n = 0;
  CnStatus status = CnStatus::fails;
  CriterionPolynomial poly;
  SignReport report;
  /// Sign of K on the definite interval (positive or negative) when that
  /// interval is nondegenerate; zero otherwise.
  Sign restricted_sign = Sign::zero;
  /// min(G(lo), G(hi)) over the definite interval; c_bar when C_n holds.
  double c_valid = 0.0;
};

CnResult check_Cn(const Potential& pot, int n,
                  CoefficientPolicy policy = CoefficientPolicy::resolved,
                  int grid = kDefaultScanGrid);

enum class Direction { increasing, decreasing, inconclusive };

std::string_view direction_name(Direction d);

enum class UniformSign { positive, negative, mixed, zero };

std::string_view uniform_sign_name(UniformSign s);

struct ChainQuantity {
  std::string name;
  UniformSign sign = UniformSign::mixed;
  /// The monotonicity this sign implies: x g'' < 0, g^2 - 2 G g' > 0 and
  /// x (g/x)' < 0 each give increasing; the reversed signs give decreasing.
  Direction implies = Direction::inconclusive;
  double min = 0.0;
  double max = 0.0;
};

struct OpialReport {
  /// x g'', g^2 - 2 G g', x (g/x)'.
  std::array<ChainQuantity, 3> quantities;
  double g2_at_zero = 0.0;
  double g4_at_zero = 0.0;
  bool g2_vanishes = false;
  /// g''(0) = 0 and g^(4)(0) < 0.
  bool proposition_applicable = false;
  int grid = 0;
};

OpialReport opial_chain_report(const Potential& pot, int grid = kDefaultScanGrid);

struct Witness {
  enum class Kind { none, criterion, opial_chain };
  Kind kind = Kind::none;
  int n = -1;
  /// Chain quantity name for opial_chain witnesses.
  std::string condition;
  /// True when the witness only holds on the definite interval.
  bool restricted = false;
};

std::string witness_label(const Witness& w);

struct MonotonicityVerdict {
  Direction direction = Direction::inconclusive;
  Witness witness;
  /// Upper end of the energy range (0, c_valid] covered by the witness.
  double c_valid = 0.0;
  std::vector<std::string> notes;
  std::vector<CnResult> criteria;
  OpialReport opial;
  CriterionCoefficients coefficients;
};

MonotonicityVerdict monotonicity_verdict(const Potential& pot, int max_n,
                                         CoefficientPolicy policy = CoefficientPolicy::resolved,
                                         int grid = kDefaultScanGrid);

}  // namespace periodfn
