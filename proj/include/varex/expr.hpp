#pragma once

#include <memory>
#include <stdexcept>
#include <string>

namespace varex {

/// Syntax error with the byte offset of the offending token.
struct ParseError : std::runtime_error {
  ParseError(std::size_t off, const std::string& what_arg)
      : std::runtime_error("parse error at offset " + std::to_string(off) + ": " + what_arg),
        offset(off) {}
  std::size_t offset;
};

/// Evaluation fault (never a silent NaN). Carries the printed subexpression.
struct EvalError : std::runtime_error {
  enum class Kind { log_domain, sqrt_domain, pow_domain, division_by_zero, overflow };
  EvalError(Kind k, const std::string& sub, const std::string& what_arg)
      : std::runtime_error(what_arg + " in subexpression " + sub), kind(k), subexpr(sub) {}
  Kind kind;
  std::string subexpr;
};

namespace detail {
struct ExprNode;
}

/// Immutable expression tree over variables x, y with + - * / ^, unary minus,
/// exp/log/abs/sqrt and min/max. Copies share the tree.
class Expr {
 public:
  Expr() = default;

  bool empty() const { return root_ == nullptr; }
  bool references_y() const;

  friend Expr parse(const std::string& src);
  friend double eval(const Expr& e, double x, double y);
  friend std::string print(const Expr& e);
  friend bool operator==(const Expr& a, const Expr& b);
  friend struct ExprBuilder;

 private:
  explicit Expr(std::shared_ptr<const detail::ExprNode> r) : root_(std::move(r)) {}
  std::shared_ptr<const detail::ExprNode> root_;
};

/// Grammar:
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := unary ('^' factor)?
///   unary  := '-' unary | atom
///   atom   := number | ident | ident '(' expr (',' expr)? ')' | '(' expr ')'
/// '^' is right-associative and applies to the full unary on its left, so
/// "-x^2" parses as (-x)^2. ASCII only, no implicit multiplication.
Expr parse(const std::string& src);

/// Recursive evaluation at a point. Domain faults (log of a non-positive
/// value, division by zero, fractional power of a negative base, sqrt of a
/// negative value) and overflow to non-finite throw EvalError.
double eval(const Expr& e, double x, double y);

/// Fully parenthesized rendering; parse(print(e)) reproduces the tree.
std::string print(const Expr& e);

/// Structural equality (same shape, same constants bit for bit).
bool operator==(const Expr& a, const Expr& b);
inline bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

/// Programmatic construction, used by tests to build random trees.
struct ExprBuilder {
  static Expr constant(double v);
  static Expr var_x();
  static Expr var_y();
  static Expr unary(const std::string& name, Expr a);  // neg, exp, log, abs, sqrt
  static Expr binary(const std::string& name, Expr a, Expr b);  // + - * / ^ min max
};

}  // namespace varex
