#include "periodfn/expr.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <set>

#include "periodfn/errors.hpp"

namespace periodfn {

enum class NodeKind { constant, variable, parameter, negate, add, sub, mul, div, pow, call };

struct Expression::Node {
  NodeKind kind;
  double value = 0.0;
  std::string name;
  Function func = Function::sin;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

constexpr std::array<std::pair<std::string_view, Function>, 9> kFunctions{{
    {"sin", Function::sin},
    {"cos", Function::cos},
    {"tan", Function::tan},
    {"sinh", Function::sinh},
    {"cosh", Function::cosh},
    {"tanh", Function::tanh},
    {"exp", Function::exp},
    {"ln", Function::ln},
    {"sqrt", Function::sqrt},
}};

const Function* lookup_function(std::string_view name) {
  for (const auto& [n, f] : kFunctions) {
    if (n == name) return &f;
  }
  return nullptr;
}

NodePtr make_node(NodeKind kind, double value = 0.0, std::string name = {},
                  Function f = Function::sin, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->kind = kind;
  n->value = value;
  n->name = std::move(name);
  n->func = f;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

NodePtr make_constant(double v) { return make_node(NodeKind::constant, v); }

NodePtr make_variable() { return make_node(NodeKind::variable); }

NodePtr make_parameter(std::string name) {
  return make_node(NodeKind::parameter, 0.0, std::move(name));
}

NodePtr make_unary(NodeKind kind, NodePtr operand, Function f = Function::sin) {
  return make_node(kind, 0.0, {}, f, std::move(operand));
}

NodePtr make_binary(NodeKind kind, NodePtr lhs, NodePtr rhs) {
  return make_node(kind, 0.0, {}, Function::sin, std::move(lhs), std::move(rhs));
}

// ---------------------------------------------------------------- parsing

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    skip_space();
    if (pos_ == text_.size()) fail("empty expression");
    NodePtr e = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { fail_at(what, pos_); }
  [[noreturn]] void fail_at(const std::string& what, std::size_t at) const {
    throw ParseError("syntax error at position " + std::to_string(at) + ": " + what, at);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(NodeKind::add, lhs, term());
      } else if (accept('-')) {
        lhs = make_binary(NodeKind::sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(NodeKind::mul, lhs, unary());
      } else if (accept('/')) {
        lhs = make_binary(NodeKind::div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make_unary(NodeKind::negate, unary());
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return make_binary(NodeKind::pow, base, unary());
    return base;
  }

  NodePtr atom() {
    skip_space();
    if (pos_ == text_.size()) fail("expected operand");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    fail("expected operand");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) fail_at("malformed number", start);
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail("malformed exponent");
    }
    double v = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) fail_at("malformed number", start);
    return make_constant(v);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    std::string name(text_.substr(start, pos_ - start));
    const Function* f = lookup_function(name);
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      if (f == nullptr) {
        throw ParseError("unknown function '" + name + "' at position " + std::to_string(start),
                         start);
      }
      ++pos_;
      NodePtr arg = expr();
      if (!accept(')')) fail("expected ')'");
      return make_unary(NodeKind::call, arg, *f);
    }
    if (f != nullptr) fail_at("function '" + name + "' needs a parenthesized argument", start);
    if (name == "x") return make_variable();
    return make_parameter(std::move(name));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// ------------------------------------------------------------- printing

int precedence(const Expression::Node& n) {
  switch (n.kind) {
    case NodeKind::add:
    case NodeKind::sub:
      return 1;
    case NodeKind::mul:
    case NodeKind::div:
      return 2;
    case NodeKind::negate:
      return 3;
    case NodeKind::pow:
      return 4;
    case NodeKind::constant:
      return n.value < 0.0 ? 3 : 5;
    default:
      return 5;
  }
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string print(const Expression::Node& n);

std::string wrap(const Expression::Node& n, bool parens) {
  return parens ? "(" + print(n) + ")" : print(n);
}

std::string print(const Expression::Node& n) {
  const int p = precedence(n);
  switch (n.kind) {
    case NodeKind::constant:
      return format_number(n.value);
    case NodeKind::variable:
      return "x";
    case NodeKind::parameter:
      return n.name;
    case NodeKind::negate:
      return "-" + wrap(*n.lhs, precedence(*n.lhs) < 3);
    case NodeKind::add:
      return wrap(*n.lhs, precedence(*n.lhs) < p) + " + " + wrap(*n.rhs, precedence(*n.rhs) <= p);
    case NodeKind::sub:
      return wrap(*n.lhs, precedence(*n.lhs) < p) + " - " + wrap(*n.rhs, precedence(*n.rhs) <= p);
    case NodeKind::mul:
      return wrap(*n.lhs, precedence(*n.lhs) < p) + "*" + wrap(*n.rhs, precedence(*n.rhs) <= p);
    case NodeKind::div:
      return wrap(*n.lhs, precedence(*n.lhs) < p) + "/" + wrap(*n.rhs, precedence(*n.rhs) <= p);
    case NodeKind::pow:
      return wrap(*n.lhs, precedence(*n.lhs) <= p) + "^" + wrap(*n.rhs, precedence(*n.rhs) < 3);
    case NodeKind::call:
      return std::string(function_name(n.func)) + "(" + print(*n.lhs) + ")";
  }
  return {};
}

// -------------------------------------------------------- differentiation

bool is_constant(const NodePtr& n, double v) {
  return n->kind == NodeKind::constant && n->value == v;
}

NodePtr fold_or(NodeKind kind, const NodePtr& a, const NodePtr& b, double value) {
  if (a->kind == NodeKind::constant && b->kind == NodeKind::constant && std::isfinite(value)) {
    return make_constant(value);
  }
  return make_binary(kind, a, b);
}

NodePtr add(const NodePtr& a, const NodePtr& b) {
  if (is_constant(a, 0.0)) return b;
  if (is_constant(b, 0.0)) return a;
  return fold_or(NodeKind::add, a, b, a->value + b->value);
}

NodePtr neg(const NodePtr& a) {
  if (a->kind == NodeKind::constant) return make_constant(-a->value);
  if (a->kind == NodeKind::negate) return a->lhs;
  return make_unary(NodeKind::negate, a);
}

NodePtr sub(const NodePtr& a, const NodePtr& b) {
  if (is_constant(b, 0.0)) return a;
  if (is_constant(a, 0.0)) return neg(b);
  return fold_or(NodeKind::sub, a, b, a->value - b->value);
}

NodePtr mul(const NodePtr& a, const NodePtr& b) {
  if (is_constant(a, 0.0) || is_constant(b, 0.0)) return make_constant(0.0);
  if (is_constant(a, 1.0)) return b;
  if (is_constant(b, 1.0)) return a;
  return fold_or(NodeKind::mul, a, b, a->value * b->value);
}

NodePtr div(const NodePtr& a, const NodePtr& b) {
  if (is_constant(a, 0.0)) return make_constant(0.0);
  if (is_constant(b, 1.0)) return a;
  if (b->kind == NodeKind::constant && b->value == 0.0) return make_binary(NodeKind::div, a, b);
  return fold_or(NodeKind::div, a, b, a->value / b->value);
}

NodePtr call(Function f, const NodePtr& a) { return make_unary(NodeKind::call, a, f); }

bool has_x(const Expression::Node& n) {
  switch (n.kind) {
    case NodeKind::variable:
      return true;
    case NodeKind::constant:
    case NodeKind::parameter:
      return false;
    default:
      return (n.lhs && has_x(*n.lhs)) || (n.rhs && has_x(*n.rhs));
  }
}

NodePtr differentiate(const NodePtr& n) {
  switch (n->kind) {
    case NodeKind::constant:
    case NodeKind::parameter:
      return make_constant(0.0);
    case NodeKind::variable:
      return make_constant(1.0);
    case NodeKind::negate:
      return neg(differentiate(n->lhs));
    case NodeKind::add:
      return add(differentiate(n->lhs), differentiate(n->rhs));
    case NodeKind::sub:
      return sub(differentiate(n->lhs), differentiate(n->rhs));
    case NodeKind::mul:
      return add(mul(differentiate(n->lhs), n->rhs), mul(n->lhs, differentiate(n->rhs)));
    case NodeKind::div: {
      // (u/v)' = u'/v - u v' / v^2
      const NodePtr& u = n->lhs;
      const NodePtr& v = n->rhs;
      NodePtr dv = differentiate(v);
      NodePtr first = div(differentiate(u), v);
      if (is_constant(dv, 0.0)) return first;
      return sub(first, div(mul(u, dv), make_binary(NodeKind::pow, v, make_constant(2.0))));
    }
    case NodeKind::pow: {
      const NodePtr& u = n->lhs;
      const NodePtr& v = n->rhs;
      if (!has_x(*v)) {
        NodePtr reduced = sub(v, make_constant(1.0));
        NodePtr power = is_constant(reduced, 1.0) ? u : make_binary(NodeKind::pow, u, reduced);
        return mul(mul(v, power), differentiate(u));
      }
      // u^v (v' ln u + v u' / u)
      NodePtr inner = add(mul(differentiate(v), call(Function::ln, u)),
                          div(mul(v, differentiate(u)), u));
      return mul(n, inner);
    }
    case NodeKind::call: {
      const NodePtr& u = n->lhs;
      NodePtr du = differentiate(u);
      if (is_constant(du, 0.0)) return make_constant(0.0);
      NodePtr outer;
      switch (n->func) {
        case Function::sin:
          outer = call(Function::cos, u);
          break;
        case Function::cos:
          outer = neg(call(Function::sin, u));
          break;
        case Function::tan:
          outer = div(make_constant(1.0),
                      make_binary(NodeKind::pow, call(Function::cos, u), make_constant(2.0)));
          break;
        case Function::sinh:
          outer = call(Function::cosh, u);
          break;
        case Function::cosh:
          outer = call(Function::sinh, u);
          break;
        case Function::tanh:
          outer = div(make_constant(1.0),
                      make_binary(NodeKind::pow, call(Function::cosh, u), make_constant(2.0)));
          break;
        case Function::exp:
          outer = n;
          break;
        case Function::ln:
          return div(du, u);
        case Function::sqrt:
          return div(du, mul(make_constant(2.0), n));
      }
      return mul(outer, du);
    }
  }
  return make_constant(0.0);
}

// ------------------------------------------------------------ evaluation

[[noreturn]] void domain_error(const char* what, const Expression::Node& at) {
  throw EvaluationError(std::string("domain error: ") + what + " in '" + print(at) + "'");
}

bool is_integer(double v) { return std::isfinite(v) && std::floor(v) == v; }

double apply(Function f, double v, const Expression::Node& at) {
  switch (f) {
    case Function::sin:
      return std::sin(v);
    case Function::cos:
      return std::cos(v);
    case Function::tan:
      return std::tan(v);
    case Function::sinh:
      return std::sinh(v);
    case Function::cosh:
      return std::cosh(v);
    case Function::tanh:
      return std::tanh(v);
    case Function::exp:
      return std::exp(v);
    case Function::ln:
      if (!(v > 0.0)) domain_error("ln of non-positive argument", at);
      return std::log(v);
    case Function::sqrt:
      if (v < 0.0) domain_error("sqrt of negative argument", at);
      return std::sqrt(v);
  }
  return 0.0;
}

double apply_pow(double base, double exponent, const Expression::Node& at) {
  if (is_integer(exponent)) {
    if (base == 0.0 && exponent < 0.0) domain_error("division by zero", at);
    return std::pow(base, exponent);
  }
  if (!(base > 0.0)) domain_error("non-integer power of non-positive base", at);
  return std::pow(base, exponent);
}

double apply_div(double num, double den, const Expression::Node& at) {
  if (den == 0.0) domain_error("division by zero", at);
  return num / den;
}

double lookup(const ParamBinding& params, const std::string& name) {
  auto it = params.find(name);
  if (it == params.end()) throw EvaluationError("unbound parameter '" + name + "'");
  if (!std::isfinite(it->second)) {
    throw EvaluationError("parameter '" + name + "' is not finite");
  }
  return it->second;
}

double eval(const Expression::Node& n, double x, const ParamBinding& p) {
  switch (n.kind) {
    case NodeKind::constant:
      return n.value;
    case NodeKind::variable:
      return x;
    case NodeKind::parameter:
      return lookup(p, n.name);
    case NodeKind::negate:
      return -eval(*n.lhs, x, p);
    case NodeKind::add:
      return eval(*n.lhs, x, p) + eval(*n.rhs, x, p);
    case NodeKind::sub:
      return eval(*n.lhs, x, p) - eval(*n.rhs, x, p);
    case NodeKind::mul:
      return eval(*n.lhs, x, p) * eval(*n.rhs, x, p);
    case NodeKind::div:
      return apply_div(eval(*n.lhs, x, p), eval(*n.rhs, x, p), n);
    case NodeKind::pow:
      return apply_pow(eval(*n.lhs, x, p), eval(*n.rhs, x, p), n);
    case NodeKind::call:
      return apply(n.func, eval(*n.lhs, x, p), n);
  }
  return 0.0;
}

// ------------------------------------------------------------ series lift

PowerSeries lift(const Expression::Node& n, const ParamBinding& p, int order) {
  switch (n.kind) {
    case NodeKind::constant:
      return PowerSeries::constant(n.value, order);
    case NodeKind::variable:
      return PowerSeries::identity(order);
    case NodeKind::parameter:
      return PowerSeries::constant(lookup(p, n.name), order);
    case NodeKind::negate:
      return -lift(*n.lhs, p, order);
    case NodeKind::add:
      return lift(*n.lhs, p, order) + lift(*n.rhs, p, order);
    case NodeKind::sub:
      return lift(*n.lhs, p, order) - lift(*n.rhs, p, order);
    case NodeKind::mul:
      return series_product(lift(*n.lhs, p, order), lift(*n.rhs, p, order));
    case NodeKind::div:
      return series_divide(lift(*n.lhs, p, order), lift(*n.rhs, p, order));
    case NodeKind::pow: {
      if (has_x(*n.rhs)) throw SeriesError("series lift of '^' needs an x-free exponent");
      const double e = eval(*n.rhs, 0.0, p);
      if (!is_integer(e) || std::abs(e) > 1e6) {
        throw SeriesError("series lift of '^' supports integer exponents only");
      }
      return series_power(lift(*n.lhs, p, order), static_cast<int>(e));
    }
    case NodeKind::call: {
      PowerSeries u = lift(*n.lhs, p, order);
      switch (n.func) {
        case Function::sin:
          return series_sin(u);
        case Function::cos:
          return series_cos(u);
        case Function::tan:
          return series_tan(u);
        case Function::sinh:
          return series_sinh(u);
        case Function::cosh:
          return series_cosh(u);
        case Function::tanh:
          return series_tanh(u);
        case Function::exp:
          return series_exp(u);
        case Function::ln:
          return series_log(u);
        case Function::sqrt:
          return series_sqrt(u);
      }
    }
  }
  return PowerSeries(order);
}

void collect_parameters(const Expression::Node& n, std::set<std::string>& out) {
  if (n.kind == NodeKind::parameter) out.insert(n.name);
  if (n.lhs) collect_parameters(*n.lhs, out);
  if (n.rhs) collect_parameters(*n.rhs, out);
}

}  // namespace

std::string_view function_name(Function f) {
  for (const auto& [n, fn] : kFunctions) {
    if (fn == f) return n;
  }
  return "?";
}

Expression Expression::parse(std::string_view text) { return Expression(Parser(text).parse()); }

Expression Expression::constant(double value) { return Expression(make_constant(value)); }
Expression Expression::variable() { return Expression(make_variable()); }
Expression Expression::parameter(std::string name) {
  return Expression(make_parameter(std::move(name)));
}

double Expression::evaluate(double x, const ParamBinding& params) const {
  return eval(*root_, x, params);
}

PowerSeries Expression::taylor_at_zero(const ParamBinding& params, int order) const {
  if (order < 1) throw SeriesError("taylor order must be >= 1");
  return lift(*root_, params, order);
}

Expression Expression::derivative() const { return Expression(differentiate(root_)); }

std::string Expression::to_string() const { return print(*root_); }

std::vector<std::string> Expression::parameters() const {
  std::set<std::string> names;
  collect_parameters(*root_, names);
  return {names.begin(), names.end()};
}

bool Expression::depends_on_x() const { return has_x(*root_); }

// ------------------------------------------------------- BoundExpression

struct BoundExpression::Instruction {
  enum class Op { push, load_x, negate, add, sub, mul, div, pow, call } op;
  double value = 0.0;
  Function func = Function::sin;
  const Expression::Node* node = nullptr;
  // Keeps the subtree alive for error messages.
  std::shared_ptr<const Expression::Node> owner;
};

BoundExpression::BoundExpression(const Expression& e, const ParamBinding& params) {
  auto code = std::make_shared<std::vector<Instruction>>();
  std::size_t depth = 0;
  std::size_t max_depth = 0;
  using Op = Instruction::Op;
  auto emit = [&](Op op, int stack_delta, double value = 0.0, Function f = Function::sin,
                  const std::shared_ptr<const Expression::Node>& node = nullptr) {
    code->push_back(Instruction{op, value, f, node.get(), node});
    depth = static_cast<std::size_t>(static_cast<long>(depth) + stack_delta);
    max_depth = std::max(max_depth, depth);
  };
  auto compile = [&](auto&& self, const std::shared_ptr<const Expression::Node>& n) -> void {
    switch (n->kind) {
      case NodeKind::constant:
        emit(Op::push, +1, n->value);
        return;
      case NodeKind::parameter:
        emit(Op::push, +1, lookup(params, n->name));
        return;
      case NodeKind::variable:
        emit(Op::load_x, +1);
        return;
      case NodeKind::negate:
        self(self, n->lhs);
        emit(Op::negate, 0);
        return;
      case NodeKind::call:
        self(self, n->lhs);
        emit(Op::call, 0, 0.0, n->func, n);
        return;
      default:
        break;
    }
    self(self, n->lhs);
    self(self, n->rhs);
    Op op = Op::add;
    switch (n->kind) {
      case NodeKind::add: op = Op::add; break;
      case NodeKind::sub: op = Op::sub; break;
      case NodeKind::mul: op = Op::mul; break;
      case NodeKind::div: op = Op::div; break;
      case NodeKind::pow: op = Op::pow; break;
      default: break;
    }
    emit(op, -1, 0.0, Function::sin, n);
  };
  compile(compile, e.root_);
  code_ = std::move(code);
  max_depth_ = max_depth;
}

double BoundExpression::operator()(double x) const {
  using Op = Instruction::Op;
  constexpr std::size_t kInline = 64;
  std::array<double, kInline> small{};
  std::vector<double> large;
  double* stack = small.data();
  if (max_depth_ > kInline) {
    large.resize(max_depth_);
    stack = large.data();
  }
  std::size_t top = 0;
  for (const Instruction& ins : *code_) {
    switch (ins.op) {
      case Op::push:
        stack[top++] = ins.value;
        break;
      case Op::load_x:
        stack[top++] = x;
        break;
      case Op::negate:
        stack[top - 1] = -stack[top - 1];
        break;
      case Op::add:
        --top;
        stack[top - 1] += stack[top];
        break;
      case Op::sub:
        --top;
        stack[top - 1] -= stack[top];
        break;
      case Op::mul:
        --top;
        stack[top - 1] *= stack[top];
        break;
      case Op::div:
        --top;
        stack[top - 1] = apply_div(stack[top - 1], stack[top], *ins.node);
        break;
      case Op::pow:
        --top;
        stack[top - 1] = apply_pow(stack[top - 1], stack[top], *ins.node);
        break;
      case Op::call:
        stack[top - 1] = apply(ins.func, stack[top - 1], *ins.node);
        break;
    }
  }
  return stack[0];
}

}  // namespace periodfn
