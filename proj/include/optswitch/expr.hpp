#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "optswitch/error.hpp"

namespace optswitch {

/// A scalar arithmetic expression in the variables `t` (time) and `x`
/// (factor value). Immutable after construction; cheap to copy.
///
/// Grammar: `+ - * /` with standard precedence (left-associative), unary
/// minus, parentheses, decimal literals with optional exponent, and the
/// calls min(a,b), max(a,b), pow(a,b), abs(a), exp(a), log(a).
class Expr {
 public:
  enum class Kind { Literal, VarT, VarX, Neg, Add, Sub, Mul, Div, Min, Max, Pow, Abs, Exp, Log };

  Expr() = default;

  /// Parses `text`; throws Error with a character offset on failure
  /// (EmptyInput, UnbalancedParenthesis, UnknownIdentifier, UnexpectedToken).
  static Expr parse(std::string_view text);

  static Expr literal(double value);
  static Expr var_t();
  static Expr var_x();
  static Expr unary(Kind kind, Expr a);             // Neg, Abs, Exp, Log
  static Expr binary(Kind kind, Expr a, Expr b);    // Add..Pow

  /// Evaluates at (t, x). Pure; throws Error on DivisionByZero,
  /// LogOfNonPositive or NonFiniteResult, naming the offending subtree.
  double eval(double t, double x) const;

  /// Canonical text form; parse(print()) rebuilds an identical tree.
  std::string print() const;

  bool operator==(const Expr& other) const;  // structural equality

  Kind kind() const;
  bool empty() const { return root_ == nullptr; }

  struct Node;

 private:
  explicit Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

/// e + literal(c); convenience used by perturbation tests and tools.
Expr shift_expr(const Expr& e, double c);

}  // namespace optswitch
