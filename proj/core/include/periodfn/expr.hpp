#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "periodfn/series.hpp"

namespace periodfn {

/// Parameter name -> value. Values must be finite.
using ParamBinding = std::map<std::string, double, std::less<>>;

enum class Function { sin, cos, tan, sinh, cosh, tanh, exp, ln, sqrt };

/// Immutable expression tree in one real variable `x` and named parameters.
///
/// Grammar (^ binds tightest and is right-associative, then unary minus,
/// then * and /, then + and -):
///
///     expr  := term (("+"|"-") term)*
///     term  := unary (("*"|"/") unary)*
///     unary := "-" unary | power
///     power := atom ("^" unary)?
///     atom  := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")"
///
/// Identifiers other than `x` and the function names are parameters.
class Expression {
 public:
  struct Node;

  /// Throws ParseError with the 0-based offset of the offending character.
  static Expression parse(std::string_view text);

  static Expression constant(double value);
  static Expression variable();
  static Expression parameter(std::string name);

  /// IEEE double evaluation. Throws EvaluationError for unbound parameters
  /// and domain violations (naming the offending subexpression).
  double evaluate(double x, const ParamBinding& params) const;

  /// Taylor coefficients c_k = e^(k)(0) / k!, k = 0..order, by truncated
  /// series arithmetic. Throws SeriesError where e is not analytic at 0
  /// under the lift rules (e.g. ln(x), non-integer powers).
  PowerSeries taylor_at_zero(const ParamBinding& params, int order) const;

  /// d/dx by structural differentiation with light constant folding.
  Expression derivative() const;

  /// Text that re-parses to an equivalent tree.
  std::string to_string() const;

  /// Sorted, unique parameter names.
  std::vector<std::string> parameters() const;
  bool depends_on_x() const;

  const Node& root() const { return *root_; }

 private:
  explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;

  friend class BoundExpression;
};

/// An expression with its parameters resolved, compiled to a flat stack
/// program for repeated evaluation. Immutable and safe to share across
/// threads.
class BoundExpression {
 public:
  BoundExpression() = default;
  /// Throws EvaluationError if a parameter is unbound or not finite.
  BoundExpression(const Expression& e, const ParamBinding& params);

  double operator()(double x) const;

 private:
  struct Instruction;
  std::shared_ptr<const std::vector<Instruction>> code_;
  std::size_t max_depth_ = 0;
};

inline Expression parse(std::string_view text) { return Expression::parse(text); }

inline double evaluate(const Expression& e, double x, const ParamBinding& p) {
  return e.evaluate(x, p);
}

inline PowerSeries taylor_at_zero(const Expression& e, const ParamBinding& p, int order) {
  return e.taylor_at_zero(p, order);
}

std::string_view function_name(Function f);

}  // namespace periodfn
