#pragma once

// Superpotential expressions in x and named parameters, with exact
// symbolic differentiation in x.
//
// Grammar:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' unary)?              right associative
//   primary := number | name | name '(' expr ')' | '(' expr ')'
//
// Functions: exp, ln (alias log), sqrt, sin, cos, sinh, cosh, tanh, sech.
// `x` is the coordinate, `pi` the constant; every other name is a parameter.

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "susyqm/params.hpp"

namespace susyqm {

class Expression {
 public:
  struct Node;

  /// Throws Error(Parse) with the offending column on malformed input.
  static Expression parse(std::string_view text);

  static Expression constant(double value);

  /// d/dx, simplified for constants and trivial factors.
  Expression derivative() const;

  double evaluate(double x, const ParamMap& params) const;
  std::vector<double> evaluate(std::span<const double> xs, const ParamMap& params) const;

  /// Parameter names referenced by the expression, sorted.
  std::vector<std::string> parameters() const;

  bool depends_on_x() const;

  std::string to_string() const;

 private:
  explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

}  // namespace susyqm
