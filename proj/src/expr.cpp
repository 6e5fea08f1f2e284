#include "varex/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <utility>
#include <vector>

namespace varex {
namespace detail {

enum class Op {
  constant,
  var_x,
  var_y,
  neg,
  exp_fn,
  log_fn,
  abs_fn,
  sqrt_fn,
  add,
  sub,
  mul,
  div,
  pow,
  min_fn,
  max_fn
};

struct ExprNode {
  Op op;
  double value = 0.0;  // constant only
  std::shared_ptr<const ExprNode> a, b;
};

using NodePtr = std::shared_ptr<const ExprNode>;

static NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

static NodePtr make_const(double v) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::constant;
  n->value = v;
  return n;
}

// Negation of a literal folds into a negative literal so that every way of
// producing "minus a constant" (builder call, '-' in source, the printed form
// of a negative constant) yields one canonical tree and print/parse round
// trips are exact.
static NodePtr make_neg(NodePtr a) {
  if (a->op == Op::constant) return make_const(-a->value);
  return make(Op::neg, std::move(a));
}

// ---------------------------------------------------------------- lexer

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, comma, end };

struct Token {
  Tok kind;
  std::size_t offset;
  double number = 0.0;
  std::string ident;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
                                  src_[pos_] == '\r'))
      ++pos_;
    Token t;
    t.offset = pos_;
    if (pos_ >= src_.size()) {
      t.kind = Tok::end;
      return t;
    }
    char c = src_[pos_];
    switch (c) {
      case '+': t.kind = Tok::plus; ++pos_; return t;
      case '-': t.kind = Tok::minus; ++pos_; return t;
      case '*': t.kind = Tok::star; ++pos_; return t;
      case '/': t.kind = Tok::slash; ++pos_; return t;
      case '^': t.kind = Tok::caret; ++pos_; return t;
      case '(': t.kind = Tok::lparen; ++pos_; return t;
      case ')': t.kind = Tok::rparen; ++pos_; return t;
      case ',': t.kind = Tok::comma; ++pos_; return t;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t end = pos_;
      while (end < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[end])) || src_[end] == '.'))
        ++end;
      if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
        std::size_t e = end + 1;
        if (e < src_.size() && (src_[e] == '+' || src_[e] == '-')) ++e;
        if (e < src_.size() && std::isdigit(static_cast<unsigned char>(src_[e]))) {
          ++e;
          while (e < src_.size() && std::isdigit(static_cast<unsigned char>(src_[e]))) ++e;
          end = e;
        }
      }
      double v = 0.0;
      auto [p, ec] = std::from_chars(src_.data() + pos_, src_.data() + end, v);
      if (ec != std::errc() || p != src_.data() + end)
        throw ParseError(pos_, "malformed number literal");
      t.kind = Tok::number;
      t.number = v;
      pos_ = end;
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
        ++end;
      t.kind = Tok::ident;
      t.ident = src_.substr(pos_, end - pos_);
      pos_ = end;
      return t;
    }
    throw ParseError(pos_, std::string("unexpected character '") + c + "'");
  }

 private:
  const std::string& src_;
  std::size_t pos_ = 0;
};

// --------------------------------------------------------------- parser

class Parser {
 public:
  explicit Parser(const std::string& src) : lex_(src) { advance(); }

  NodePtr parse_all() {
    NodePtr e = parse_expr();
    if (cur_.kind != Tok::end)
      throw ParseError(cur_.offset, "trailing input, expected end of expression");
    return e;
  }

 private:
  void advance() { cur_ = lex_.next(); }

  NodePtr parse_expr() {
    NodePtr e = parse_term();
    while (cur_.kind == Tok::plus || cur_.kind == Tok::minus) {
      Op op = cur_.kind == Tok::plus ? Op::add : Op::sub;
      advance();
      e = make(op, e, parse_term());
    }
    return e;
  }

  NodePtr parse_term() {
    NodePtr e = parse_factor();
    while (cur_.kind == Tok::star || cur_.kind == Tok::slash) {
      Op op = cur_.kind == Tok::star ? Op::mul : Op::div;
      advance();
      e = make(op, e, parse_factor());
    }
    return e;
  }

  NodePtr parse_factor() {
    NodePtr base = parse_unary();
    if (cur_.kind == Tok::caret) {
      advance();
      return make(Op::pow, base, parse_factor());  // right-associative
    }
    return base;
  }

  NodePtr parse_unary() {
    if (cur_.kind == Tok::minus) {
      advance();
      return make_neg(parse_unary());
    }
    return parse_atom();
  }

  NodePtr parse_atom() {
    if (cur_.kind == Tok::number) {
      NodePtr n = make_const(cur_.number);
      advance();
      return n;
    }
    if (cur_.kind == Tok::lparen) {
      advance();
      NodePtr e = parse_expr();
      expect(Tok::rparen, "')'");
      return e;
    }
    if (cur_.kind == Tok::ident) {
      std::string name = cur_.ident;
      std::size_t off = cur_.offset;
      advance();
      if (cur_.kind != Tok::lparen) {
        if (name == "x") return make(Op::var_x);
        if (name == "y") return make(Op::var_y);
        throw ParseError(off, "unknown identifier '" + name + "'");
      }
      advance();  // '('
      NodePtr first = parse_expr();
      if (cur_.kind == Tok::comma) {
        advance();
        NodePtr second = parse_expr();
        expect(Tok::rparen, "')'");
        if (name == "min") return make(Op::min_fn, first, second);
        if (name == "max") return make(Op::max_fn, first, second);
        throw ParseError(off, "function '" + name + "' does not take two arguments");
      }
      expect(Tok::rparen, "')' or ','");
      if (name == "neg") return make_neg(std::move(first));
      if (name == "exp") return make(Op::exp_fn, first);
      if (name == "log") return make(Op::log_fn, first);
      if (name == "abs") return make(Op::abs_fn, first);
      if (name == "sqrt") return make(Op::sqrt_fn, first);
      if (name == "min" || name == "max")
        throw ParseError(off, "function '" + name + "' needs two arguments");
      throw ParseError(off, "unknown function '" + name + "'");
    }
    throw ParseError(cur_.offset, "expected a number, identifier or '('");
  }

  void expect(Tok k, const char* what) {
    if (cur_.kind != k) throw ParseError(cur_.offset, std::string("expected ") + what);
    advance();
  }

  Lexer lex_;
  Token cur_;
};

// ----------------------------------------------------------- evaluation

static std::string print_node(const ExprNode* n);

[[noreturn]] static void fault(EvalError::Kind k, const ExprNode* n, const char* msg) {
  throw EvalError(k, print_node(n), msg);
}

static double check_finite(double v, const ExprNode* n) {
  if (!std::isfinite(v)) fault(EvalError::Kind::overflow, n, "non-finite result");
  return v;
}

// Integer powers go through multiplication: exact for the small squares the
// solver configs rely on, and well-defined for negative bases.
static double pow_by_squaring(double base, long n) {
  double r = 1.0, b = base;
  unsigned long m = static_cast<unsigned long>(n < 0 ? -n : n);
  while (m > 0) {
    if (m & 1UL) r *= b;
    b *= b;
    m >>= 1UL;
  }
  return r;
}

static double eval_node(const ExprNode* n, double x, double y) {
  switch (n->op) {
    case Op::constant: return n->value;
    case Op::var_x: return x;
    case Op::var_y: return y;
    case Op::neg: return -eval_node(n->a.get(), x, y);
    case Op::exp_fn: return check_finite(std::exp(eval_node(n->a.get(), x, y)), n);
    case Op::log_fn: {
      double v = eval_node(n->a.get(), x, y);
      if (v <= 0.0) fault(EvalError::Kind::log_domain, n, "log of a non-positive value");
      return check_finite(std::log(v), n);
    }
    case Op::abs_fn: return std::fabs(eval_node(n->a.get(), x, y));
    case Op::sqrt_fn: {
      double v = eval_node(n->a.get(), x, y);
      if (v < 0.0) fault(EvalError::Kind::sqrt_domain, n, "sqrt of a negative value");
      return std::sqrt(v);
    }
    case Op::add:
      return check_finite(eval_node(n->a.get(), x, y) + eval_node(n->b.get(), x, y), n);
    case Op::sub:
      return check_finite(eval_node(n->a.get(), x, y) - eval_node(n->b.get(), x, y), n);
    case Op::mul:
      return check_finite(eval_node(n->a.get(), x, y) * eval_node(n->b.get(), x, y), n);
    case Op::div: {
      double d = eval_node(n->b.get(), x, y);
      if (d == 0.0) fault(EvalError::Kind::division_by_zero, n, "division by zero");
      return check_finite(eval_node(n->a.get(), x, y) / d, n);
    }
    case Op::pow: {
      double base = eval_node(n->a.get(), x, y);
      double ex = eval_node(n->b.get(), x, y);
      if (ex == std::floor(ex) && std::fabs(ex) <= 64.0) {
        long ni = static_cast<long>(ex);
        if (ni < 0) {
          double denom = pow_by_squaring(base, -ni);
          if (denom == 0.0) fault(EvalError::Kind::division_by_zero, n, "zero base with negative power");
          return check_finite(1.0 / denom, n);
        }
        return check_finite(pow_by_squaring(base, ni), n);
      }
      if (base < 0.0)
        fault(EvalError::Kind::pow_domain, n, "fractional power of a negative base");
      if (base == 0.0 && ex < 0.0)
        fault(EvalError::Kind::division_by_zero, n, "zero base with negative power");
      return check_finite(std::pow(base, ex), n);
    }
    case Op::min_fn:
      return std::fmin(eval_node(n->a.get(), x, y), eval_node(n->b.get(), x, y));
    case Op::max_fn:
      return std::fmax(eval_node(n->a.get(), x, y), eval_node(n->b.get(), x, y));
  }
  throw std::logic_error("eval: bad node");
}

// ------------------------------------------------------------- printing

static std::string print_const(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

static std::string print_node(const ExprNode* n) {
  switch (n->op) {
    case Op::constant: return print_const(n->value);
    case Op::var_x: return "x";
    case Op::var_y: return "y";
    case Op::neg: return "-(" + print_node(n->a.get()) + ")";
    case Op::exp_fn: return "exp(" + print_node(n->a.get()) + ")";
    case Op::log_fn: return "log(" + print_node(n->a.get()) + ")";
    case Op::abs_fn: return "abs(" + print_node(n->a.get()) + ")";
    case Op::sqrt_fn: return "sqrt(" + print_node(n->a.get()) + ")";
    case Op::add: return "(" + print_node(n->a.get()) + " + " + print_node(n->b.get()) + ")";
    case Op::sub: return "(" + print_node(n->a.get()) + " - " + print_node(n->b.get()) + ")";
    case Op::mul: return "(" + print_node(n->a.get()) + " * " + print_node(n->b.get()) + ")";
    case Op::div: return "(" + print_node(n->a.get()) + " / " + print_node(n->b.get()) + ")";
    case Op::pow: return "(" + print_node(n->a.get()) + ")^(" + print_node(n->b.get()) + ")";
    case Op::min_fn: return "min(" + print_node(n->a.get()) + ", " + print_node(n->b.get()) + ")";
    case Op::max_fn: return "max(" + print_node(n->a.get()) + ", " + print_node(n->b.get()) + ")";
  }
  throw std::logic_error("print: bad node");
}

static bool equal_nodes(const ExprNode* a, const ExprNode* b) {
  if (a == b) return true;
  if (a == nullptr || b == nullptr) return false;
  if (a->op != b->op) return false;
  if (a->op == Op::constant)
    return a->value == b->value || (std::isnan(a->value) && std::isnan(b->value));
  return equal_nodes(a->a.get(), b->a.get()) && equal_nodes(a->b.get(), b->b.get());
}

static bool node_references_y(const ExprNode* n) {
  if (n == nullptr) return false;
  if (n->op == Op::var_y) return true;
  return node_references_y(n->a.get()) || node_references_y(n->b.get());
}

}  // namespace detail

bool Expr::references_y() const { return detail::node_references_y(root_.get()); }

Expr parse(const std::string& src) {
  detail::Parser p(src);
  return Expr(p.parse_all());
}

double eval(const Expr& e, double x, double y) {
  if (e.empty()) throw std::invalid_argument("eval: empty expression");
  return detail::eval_node(e.root_.get(), x, y);
}

std::string print(const Expr& e) {
  if (e.empty()) throw std::invalid_argument("print: empty expression");
  return detail::print_node(e.root_.get());
}

bool operator==(const Expr& a, const Expr& b) {
  return detail::equal_nodes(a.root_.get(), b.root_.get());
}

Expr ExprBuilder::constant(double v) { return Expr(detail::make_const(v)); }
Expr ExprBuilder::var_x() { return Expr(detail::make(detail::Op::var_x)); }
Expr ExprBuilder::var_y() { return Expr(detail::make(detail::Op::var_y)); }

Expr ExprBuilder::unary(const std::string& name, Expr a) {
  using detail::Op;
  Op op;
  if (name == "neg") return Expr(detail::make_neg(a.root_));
  else if (name == "exp") op = Op::exp_fn;
  else if (name == "log") op = Op::log_fn;
  else if (name == "abs") op = Op::abs_fn;
  else if (name == "sqrt") op = Op::sqrt_fn;
  else throw std::invalid_argument("ExprBuilder::unary: unknown op " + name);
  return Expr(detail::make(op, a.root_));
}

Expr ExprBuilder::binary(const std::string& name, Expr a, Expr b) {
  using detail::Op;
  Op op;
  if (name == "+") op = Op::add;
  else if (name == "-") op = Op::sub;
  else if (name == "*") op = Op::mul;
  else if (name == "/") op = Op::div;
  else if (name == "^") op = Op::pow;
  else if (name == "min") op = Op::min_fn;
  else if (name == "max") op = Op::max_fn;
  else throw std::invalid_argument("ExprBuilder::binary: unknown op " + name);
  return Expr(detail::make(op, a.root_, b.root_));
}

}  // namespace varex
