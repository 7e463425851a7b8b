#include "susyqm/expression.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <set>
#include <sstream>

#include "susyqm/errors.hpp"

namespace susyqm {

std::string describe(const ParamMap& params) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [k, v] : params) {
    if (!first) out << ", ";
    out << k << '=' << v;
    first = false;
  }
  return out.str();
}

enum class Op { Const, Var, Param, Add, Sub, Mul, Div, Pow, Neg, Func };
enum class Fn { Exp, Ln, Sqrt, Sin, Cos, Sinh, Cosh, Tanh, Sech };

struct Expression::Node {
  Op op;
  double value = 0.0;
  std::string name;
  Fn fn = Fn::Exp;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

NodePtr make_const(double v) { return std::make_shared<const Node>(Node{Op::Const, v}); }
NodePtr make_var() { return std::make_shared<const Node>(Node{Op::Var}); }
NodePtr make_param(std::string name) {
  return std::make_shared<const Node>(Node{Op::Param, 0.0, std::move(name)});
}

bool is_const(const NodePtr& n, double v) { return n->op == Op::Const && n->value == v; }

NodePtr make_binary(Op op, NodePtr a, NodePtr b) {
  if (a->op == Op::Const && b->op == Op::Const) {
    switch (op) {
      case Op::Add: return make_const(a->value + b->value);
      case Op::Sub: return make_const(a->value - b->value);
      case Op::Mul: return make_const(a->value * b->value);
      case Op::Div: return make_const(a->value / b->value);
      case Op::Pow: return make_const(std::pow(a->value, b->value));
      default: break;
    }
  }
  switch (op) {
    case Op::Add:
      if (is_const(a, 0.0)) return b;
      if (is_const(b, 0.0)) return a;
      break;
    case Op::Sub:
      if (is_const(b, 0.0)) return a;
      if (is_const(a, 0.0)) return std::make_shared<const Node>(Node{Op::Neg, 0.0, {}, Fn::Exp, b});
      break;
    case Op::Mul:
      if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
      if (is_const(a, 1.0)) return b;
      if (is_const(b, 1.0)) return a;
      break;
    case Op::Div:
      if (is_const(a, 0.0)) return make_const(0.0);
      if (is_const(b, 1.0)) return a;
      break;
    case Op::Pow:
      if (is_const(b, 1.0)) return a;
      if (is_const(b, 0.0)) return make_const(1.0);
      break;
    default:
      break;
  }
  return std::make_shared<const Node>(Node{op, 0.0, {}, Fn::Exp, std::move(a), std::move(b)});
}

NodePtr make_neg(NodePtr a) {
  if (a->op == Op::Const) return make_const(-a->value);
  if (a->op == Op::Neg) return a->a;
  return std::make_shared<const Node>(Node{Op::Neg, 0.0, {}, Fn::Exp, std::move(a)});
}

NodePtr make_func(Fn fn, NodePtr a) {
  return std::make_shared<const Node>(Node{Op::Func, 0.0, {}, fn, std::move(a)});
}

NodePtr add(NodePtr a, NodePtr b) { return make_binary(Op::Add, std::move(a), std::move(b)); }
NodePtr sub(NodePtr a, NodePtr b) { return make_binary(Op::Sub, std::move(a), std::move(b)); }
NodePtr mul(NodePtr a, NodePtr b) { return make_binary(Op::Mul, std::move(a), std::move(b)); }
NodePtr div(NodePtr a, NodePtr b) { return make_binary(Op::Div, std::move(a), std::move(b)); }
NodePtr pow(NodePtr a, NodePtr b) { return make_binary(Op::Pow, std::move(a), std::move(b)); }

const char* fn_name(Fn fn) {
  switch (fn) {
    case Fn::Exp: return "exp";
    case Fn::Ln: return "ln";
    case Fn::Sqrt: return "sqrt";
    case Fn::Sin: return "sin";
    case Fn::Cos: return "cos";
    case Fn::Sinh: return "sinh";
    case Fn::Cosh: return "cosh";
    case Fn::Tanh: return "tanh";
    case Fn::Sech: return "sech";
  }
  return "?";
}

bool lookup_fn(const std::string& name, Fn& fn) {
  static const std::pair<const char*, Fn> table[] = {
      {"exp", Fn::Exp},   {"ln", Fn::Ln},     {"log", Fn::Ln},   {"sqrt", Fn::Sqrt},
      {"sin", Fn::Sin},   {"cos", Fn::Cos},   {"sinh", Fn::Sinh}, {"cosh", Fn::Cosh},
      {"tanh", Fn::Tanh}, {"sech", Fn::Sech},
  };
  for (const auto& [n, f] : table) {
    if (name == n) {
      fn = f;
      return true;
    }
  }
  return false;
}

double apply_fn(Fn fn, double v) {
  switch (fn) {
    case Fn::Exp: return std::exp(v);
    case Fn::Ln: return std::log(v);
    case Fn::Sqrt: return std::sqrt(v);
    case Fn::Sin: return std::sin(v);
    case Fn::Cos: return std::cos(v);
    case Fn::Sinh: return std::sinh(v);
    case Fn::Cosh: return std::cosh(v);
    case Fn::Tanh: return std::tanh(v);
    case Fn::Sech: return 1.0 / std::cosh(v);
  }
  return std::nan("");
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    auto e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::Parse, "malformed expression \"" + std::string(text_) +
                                      "\" at column " + std::to_string(pos_ + 1) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    auto lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = add(lhs, term());
      } else if (accept('-')) {
        lhs = sub(lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    auto lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = mul(lhs, unary());
      } else if (accept('/')) {
        lhs = div(lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make_neg(unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (accept('^')) return pow(base, unary());
    return base;
  }

  NodePtr primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
        name.push_back(text_[pos_++]);
      }
      Fn fn;
      if (lookup_fn(name, fn)) {
        if (!accept('(')) fail("expected '(' after " + name);
        auto arg = expr();
        if (!accept(')')) fail("expected ')'");
        return make_func(fn, arg);
      }
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == '(') fail("unknown function " + name);
      if (name == "x") return make_var();
      if (name == "pi") return make_const(std::numbers::pi);
      return make_param(name);
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::string rest(text_.substr(pos_));
    char* end = nullptr;
    const double v = std::strtod(rest.c_str(), &end);
    if (end == rest.c_str()) fail("bad number");
    pos_ += static_cast<std::size_t>(end - rest.c_str());
    return make_const(v);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

bool has_x(const NodePtr& n) {
  if (!n) return false;
  if (n->op == Op::Var) return true;
  return has_x(n->a) || has_x(n->b);
}

NodePtr diff(const NodePtr& n) {
  switch (n->op) {
    case Op::Const:
    case Op::Param:
      return make_const(0.0);
    case Op::Var:
      return make_const(1.0);
    case Op::Add:
      return add(diff(n->a), diff(n->b));
    case Op::Sub:
      return sub(diff(n->a), diff(n->b));
    case Op::Neg:
      return make_neg(diff(n->a));
    case Op::Mul:
      return add(mul(diff(n->a), n->b), mul(n->a, diff(n->b)));
    case Op::Div:
      return div(sub(mul(diff(n->a), n->b), mul(n->a, diff(n->b))), pow(n->b, make_const(2.0)));
    case Op::Pow: {
      const NodePtr& u = n->a;
      const NodePtr& v = n->b;
      if (!has_x(v)) {
        return mul(mul(v, pow(u, sub(v, make_const(1.0)))), diff(u));
      }
      // d(u^v) = u^v (v' ln u + v u'/u)
      return mul(n, add(mul(diff(v), make_func(Fn::Ln, u)), div(mul(v, diff(u)), u)));
    }
    case Op::Func: {
      const NodePtr& u = n->a;
      const NodePtr du = diff(u);
      if (is_const(du, 0.0)) return make_const(0.0);
      NodePtr outer;
      switch (n->fn) {
        case Fn::Exp: outer = n; break;
        case Fn::Ln: outer = div(make_const(1.0), u); break;
        case Fn::Sqrt: outer = div(make_const(0.5), n); break;
        case Fn::Sin: outer = make_func(Fn::Cos, u); break;
        case Fn::Cos: outer = make_neg(make_func(Fn::Sin, u)); break;
        case Fn::Sinh: outer = make_func(Fn::Cosh, u); break;
        case Fn::Cosh: outer = make_func(Fn::Sinh, u); break;
        case Fn::Tanh: outer = pow(make_func(Fn::Sech, u), make_const(2.0)); break;
        case Fn::Sech: outer = make_neg(mul(n, make_func(Fn::Tanh, u))); break;
      }
      return mul(outer, du);
    }
  }
  return make_const(0.0);
}

double param_value(const ParamMap& params, const std::string& name) {
  const auto it = params.find(name);
  if (it == params.end()) {
    throw Error(ErrorKind::InvalidArgument, "missing value for parameter '" + name + "'");
  }
  return it->second;
}

double eval(const NodePtr& n, double x, const ParamMap& p) {
  switch (n->op) {
    case Op::Const: return n->value;
    case Op::Var: return x;
    case Op::Param: return param_value(p, n->name);
    case Op::Add: return eval(n->a, x, p) + eval(n->b, x, p);
    case Op::Sub: return eval(n->a, x, p) - eval(n->b, x, p);
    case Op::Mul: return eval(n->a, x, p) * eval(n->b, x, p);
    case Op::Div: return eval(n->a, x, p) / eval(n->b, x, p);
    case Op::Pow: return std::pow(eval(n->a, x, p), eval(n->b, x, p));
    case Op::Neg: return -eval(n->a, x, p);
    case Op::Func: return apply_fn(n->fn, eval(n->a, x, p));
  }
  return std::nan("");
}

// Array-at-a-time evaluation; each node touches the whole array once.
std::vector<double> eval_all(const NodePtr& n, std::span<const double> xs, const ParamMap& p) {
  const std::size_t m = xs.size();
  switch (n->op) {
    case Op::Const: return std::vector<double>(m, n->value);
    case Op::Var: return std::vector<double>(xs.begin(), xs.end());
    case Op::Param: return std::vector<double>(m, param_value(p, n->name));
    case Op::Neg: {
      auto a = eval_all(n->a, xs, p);
      for (double& v : a) v = -v;
      return a;
    }
    case Op::Func: {
      auto a = eval_all(n->a, xs, p);
      for (double& v : a) v = apply_fn(n->fn, v);
      return a;
    }
    default:
      break;
  }
  auto a = eval_all(n->a, xs, p);
  const auto b = eval_all(n->b, xs, p);
  switch (n->op) {
    case Op::Add: for (std::size_t i = 0; i < m; ++i) a[i] += b[i]; break;
    case Op::Sub: for (std::size_t i = 0; i < m; ++i) a[i] -= b[i]; break;
    case Op::Mul: for (std::size_t i = 0; i < m; ++i) a[i] *= b[i]; break;
    case Op::Div: for (std::size_t i = 0; i < m; ++i) a[i] /= b[i]; break;
    case Op::Pow: for (std::size_t i = 0; i < m; ++i) a[i] = std::pow(a[i], b[i]); break;
    default: break;
  }
  return a;
}

void collect(const NodePtr& n, std::set<std::string>& names) {
  if (!n) return;
  if (n->op == Op::Param) names.insert(n->name);
  collect(n->a, names);
  collect(n->b, names);
}

int precedence(const NodePtr& n) {
  switch (n->op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;
  }
}

std::string render(const NodePtr& n);

std::string wrap(const NodePtr& child, int min_prec) {
  auto s = render(child);
  return precedence(child) < min_prec ? "(" + s + ")" : s;
}

std::string render(const NodePtr& n) {
  switch (n->op) {
    case Op::Const: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", n->value);
      return n->value < 0 ? "(" + std::string(buf) + ")" : std::string(buf);
    }
    case Op::Var: return "x";
    case Op::Param: return n->name;
    case Op::Add: return wrap(n->a, 1) + "+" + wrap(n->b, 1);
    case Op::Sub: return wrap(n->a, 1) + "-" + wrap(n->b, 2);
    case Op::Mul: return wrap(n->a, 2) + "*" + wrap(n->b, 3);
    case Op::Div: return wrap(n->a, 2) + "/" + wrap(n->b, 3);
    case Op::Pow: return wrap(n->a, 5) + "^" + wrap(n->b, 4);
    case Op::Neg: return "-" + wrap(n->a, 3);
    case Op::Func: return std::string(fn_name(n->fn)) + "(" + render(n->a) + ")";
  }
  return "?";
}

}  // namespace

Expression Expression::parse(std::string_view text) { return Expression(Parser(text).parse()); }

Expression Expression::constant(double value) { return Expression(make_const(value)); }

Expression Expression::derivative() const { return Expression(diff(root_)); }

double Expression::evaluate(double x, const ParamMap& params) const {
  return eval(root_, x, params);
}

std::vector<double> Expression::evaluate(std::span<const double> xs,
                                         const ParamMap& params) const {
  return eval_all(root_, xs, params);
}

std::vector<std::string> Expression::parameters() const {
  std::set<std::string> names;
  collect(root_, names);
  return {names.begin(), names.end()};
}

bool Expression::depends_on_x() const { return has_x(root_); }

std::string Expression::to_string() const { return render(root_); }

}  // namespace susyqm
