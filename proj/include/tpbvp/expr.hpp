#pragma once

/**
 * @file expr.hpp
 * @brief One-variable arithmetic expressions for the nonlinearity f(u) and
 * the boundary weight g(t).
 *
 * Grammar (recursive descent, lowest precedence first):
 *
 *     expr    := term (('+' | '-') term)*
 *     term    := unary (('*' | '/') unary)*
 *     unary   := '-' unary | power
 *     power   := primary ('^' unary)?        right associative
 *     primary := number | variable | func '(' expr ')' | '(' expr ')'
 *
 * so `-2^2` is `-(2^2)` and `2^3^2` is `2^(3^2)`. Functions are
 * exp, ln, sqrt, sin, cos, abs. There is no implicit multiplication.
 */

#include <charconv>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

namespace tpbvp {

enum class NodeKind { constant, variable, unary, binary, call };

enum class Function { exp, ln, sqrt, sin, cos, abs };

inline std::string_view function_name(Function fn) {
  switch (fn) {
    case Function::exp: return "exp";
    case Function::ln: return "ln";
    case Function::sqrt: return "sqrt";
    case Function::sin: return "sin";
    case Function::cos: return "cos";
    case Function::abs: return "abs";
  }
  return "?";
}

/// A node of the expression tree. `op` is one of "+-*/^" for binary nodes
/// and '-' for unary nodes; `function` is meaningful for calls only.
struct ExprNode {
  NodeKind kind = NodeKind::constant;
  double value = 0.0;
  char op = '\0';
  Function function = Function::exp;
  std::vector<ExprNode> children;

  bool operator==(const ExprNode&) const = default;

  static ExprNode constant(double v) { return ExprNode{NodeKind::constant, v, '\0', Function::exp, {}}; }
  static ExprNode variable() { return ExprNode{NodeKind::variable, 0.0, '\0', Function::exp, {}}; }
  static ExprNode negate(ExprNode child) {
    ExprNode n{NodeKind::unary, 0.0, '-', Function::exp, {}};
    n.children.push_back(std::move(child));
    return n;
  }
  static ExprNode binary(char op, ExprNode lhs, ExprNode rhs) {
    ExprNode n{NodeKind::binary, 0.0, op, Function::exp, {}};
    n.children.push_back(std::move(lhs));
    n.children.push_back(std::move(rhs));
    return n;
  }
  static ExprNode call(Function fn, ExprNode arg) {
    ExprNode n{NodeKind::call, 0.0, '\0', fn, {}};
    n.children.push_back(std::move(arg));
    return n;
  }
};

enum class ParseErrorKind { syntax, unknown_identifier, wrong_variable };

/// Raised by parse(). Carries the 0-based byte offset and the 1-based
/// line/column of the offending token.
class ParseError : public std::invalid_argument {
 public:
  ParseError(ParseErrorKind kind, std::size_t offset, std::size_t line, std::size_t column,
             const std::string& detail)
      : std::invalid_argument(std::to_string(line) + ":" + std::to_string(column) + ": " +
                              kind_label(kind) + ": " + detail),
        kind_(kind),
        offset_(offset),
        line_(line),
        column_(column) {}

  ParseErrorKind kind() const noexcept { return kind_; }
  std::size_t offset() const noexcept { return offset_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string kind_label(ParseErrorKind k) {
    switch (k) {
      case ParseErrorKind::syntax: return "syntax error";
      case ParseErrorKind::unknown_identifier: return "unknown identifier";
      case ParseErrorKind::wrong_variable: return "wrong variable";
    }
    return "error";
  }

  ParseErrorKind kind_;
  std::size_t offset_;
  std::size_t line_;
  std::size_t column_;
};

/// Raised when an expression is evaluated outside its domain. Names the
/// failing sub-expression and the argument it received.
class EvalError : public std::domain_error {
 public:
  EvalError(std::string subexpression, double argument, const std::string& what)
      : std::domain_error("domain error in '" + subexpression + "': " + what),
        subexpression_(std::move(subexpression)),
        argument_(argument) {}

  const std::string& subexpression() const noexcept { return subexpression_; }
  double argument() const noexcept { return argument_; }

 private:
  std::string subexpression_;
  double argument_;
};

namespace detail {

inline std::string format_constant(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline bool is_atomic(const ExprNode& n) {
  return n.kind == NodeKind::constant || n.kind == NodeKind::variable || n.kind == NodeKind::call;
}

inline void print(const ExprNode& n, std::string_view var, std::string& out) {
  auto wrapped = [&](const ExprNode& c) {
    if (is_atomic(c)) {
      print(c, var, out);
    } else {
      out += '(';
      print(c, var, out);
      out += ')';
    }
  };
  switch (n.kind) {
    case NodeKind::constant: out += format_constant(n.value); break;
    case NodeKind::variable: out += var; break;
    case NodeKind::unary:
      out += '-';
      wrapped(n.children[0]);
      break;
    case NodeKind::binary:
      wrapped(n.children[0]);
      out += ' ';
      out += n.op;
      out += ' ';
      wrapped(n.children[1]);
      break;
    case NodeKind::call:
      out += function_name(n.function);
      out += '(';
      print(n.children[0], var, out);
      out += ')';
      break;
  }
}

inline std::string to_text(const ExprNode& n, std::string_view var) {
  std::string s;
  print(n, var, s);
  return s;
}

template <std::floating_point Real>
Real eval_node(const ExprNode& n, std::string_view var, Real x) {
  auto fail = [&](Real arg, const std::string& what) -> Real {
    throw EvalError(to_text(n, var), static_cast<double>(arg), what);
  };
  Real r{};
  switch (n.kind) {
    case NodeKind::constant: return static_cast<Real>(n.value);
    case NodeKind::variable: return x;
    case NodeKind::unary: r = -eval_node<Real>(n.children[0], var, x); break;
    case NodeKind::binary: {
      const Real a = eval_node<Real>(n.children[0], var, x);
      const Real b = eval_node<Real>(n.children[1], var, x);
      switch (n.op) {
        case '+': r = a + b; break;
        case '-': r = a - b; break;
        case '*': r = a * b; break;
        case '/':
          if (b == Real(0)) return fail(b, "division by zero");
          r = a / b;
          break;
        case '^':
          if (a < Real(0) && std::trunc(b) != b) return fail(a, "negative base with non-integer exponent");
          if (a == Real(0) && b < Real(0)) return fail(a, "zero base with negative exponent");
          r = std::pow(a, b);
          break;
        default: return fail(a, std::string("unknown operator ") + n.op);
      }
      break;
    }
    case NodeKind::call: {
      const Real a = eval_node<Real>(n.children[0], var, x);
      switch (n.function) {
        case Function::exp: r = std::exp(a); break;
        case Function::ln:
          if (!(a > Real(0))) {
            std::ostringstream os;
            os << "ln argument " << static_cast<double>(a) << " is not positive";
            return fail(a, os.str());
          }
          r = std::log(a);
          break;
        case Function::sqrt:
          if (a < Real(0)) {
            std::ostringstream os;
            os << "sqrt argument " << static_cast<double>(a) << " is negative";
            return fail(a, os.str());
          }
          r = std::sqrt(a);
          break;
        case Function::sin: r = std::sin(a); break;
        case Function::cos: r = std::cos(a); break;
        case Function::abs: r = std::abs(a); break;
      }
      break;
    }
  }
  if (std::isnan(r)) return fail(x, "result is not a number");
  return r;
}

}  // namespace detail

/// Parsed, immutable expression in a single free variable. Copies share the
/// underlying tree.
class ExprAst {
 public:
  ExprAst(ExprNode root, std::string variable)
      : root_(std::make_shared<const ExprNode>(std::move(root))), variable_(std::move(variable)) {}

  const ExprNode& root() const noexcept { return *root_; }
  const std::string& variable() const noexcept { return variable_; }

  /// Fully parenthesised-where-needed rendering; parse(to_string()) yields
  /// a structurally identical tree.
  std::string to_string() const { return detail::to_text(*root_, variable_); }

  template <std::floating_point Real = double>
  Real eval(Real x) const {
    return detail::eval_node<Real>(*root_, variable_, x);
  }

  template <std::floating_point Real>
  Real operator()(Real x) const {
    return eval<Real>(x);
  }

  friend bool operator==(const ExprAst& a, const ExprAst& b) {
    return a.variable_ == b.variable_ && *a.root_ == *b.root_;
  }

 private:
  std::shared_ptr<const ExprNode> root_;
  std::string variable_;
};

namespace detail {

enum class Tok { number, ident, plus, minus, star, slash, caret, lparen, rparen, end };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string_view text;
  double value = 0.0;
};

class Parser {
 public:
  Parser(std::string_view src, std::string_view variable) : src_(src), var_(variable) { advance(); }

  ExprNode parse_all() {
    if (tok_.kind == Tok::end) syntax(tok_.offset, "empty expression");
    ExprNode e = expr();
    if (tok_.kind != Tok::end) syntax(tok_.offset, "unexpected '" + std::string(tok_.text) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(ParseErrorKind kind, std::size_t offset, const std::string& detail) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < src_.size(); ++i) {
      if (src_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(kind, offset, line, col, detail);
  }
  [[noreturn]] void syntax(std::size_t offset, const std::string& detail) const {
    fail(ParseErrorKind::syntax, offset, detail);
  }

  void advance() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
                                  src_[pos_] == '\r'))
      ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= src_.size()) {
      tok_ = {Tok::end, start, {}};
      return;
    }
    const char c = src_[pos_];
    auto single = [&](Tok k) {
      ++pos_;
      tok_ = {k, start, src_.substr(start, 1)};
    };
    switch (c) {
      case '+': return single(Tok::plus);
      case '-': return single(Tok::minus);
      case '*': return single(Tok::star);
      case '/': return single(Tok::slash);
      case '^': return single(Tok::caret);
      case '(': return single(Tok::lparen);
      case ')': return single(Tok::rparen);
      default: break;
    }
    if (is_digit(c) || c == '.') {
      while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
      if (pos_ < src_.size() && src_[pos_] == '.') {
        ++pos_;
        while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
      }
      if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
        std::size_t p = pos_ + 1;
        if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
        if (p < src_.size() && is_digit(src_[p])) {
          while (p < src_.size() && is_digit(src_[p])) ++p;
          pos_ = p;
        }
      }
      const std::string_view text = src_.substr(start, pos_ - start);
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
      if (ec != std::errc() || ptr != text.data() + text.size())
        syntax(start, "malformed number '" + std::string(text) + "'");
      tok_ = {Tok::number, start, text, v};
      return;
    }
    if (is_alpha(c)) {
      while (pos_ < src_.size() && (is_alpha(src_[pos_]) || is_digit(src_[pos_]))) ++pos_;
      tok_ = {Tok::ident, start, src_.substr(start, pos_ - start)};
      return;
    }
    syntax(start, std::string("unexpected character '") + c + "'");
  }

  static bool is_digit(char c) { return c >= '0' && c <= '9'; }
  static bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }

  ExprNode expr() {
    ExprNode lhs = term();
    while (tok_.kind == Tok::plus || tok_.kind == Tok::minus) {
      const char op = tok_.kind == Tok::plus ? '+' : '-';
      advance();
      lhs = ExprNode::binary(op, std::move(lhs), term());
    }
    return lhs;
  }

  ExprNode term() {
    ExprNode lhs = unary();
    while (tok_.kind == Tok::star || tok_.kind == Tok::slash) {
      const char op = tok_.kind == Tok::star ? '*' : '/';
      advance();
      lhs = ExprNode::binary(op, std::move(lhs), unary());
    }
    return lhs;
  }

  ExprNode unary() {
    if (tok_.kind == Tok::minus) {
      advance();
      return ExprNode::negate(unary());
    }
    return power();
  }

  ExprNode power() {
    ExprNode base = primary();
    if (tok_.kind == Tok::caret) {
      advance();
      return ExprNode::binary('^', std::move(base), unary());
    }
    return base;
  }

  ExprNode primary() {
    const Token t = tok_;
    switch (t.kind) {
      case Tok::number:
        advance();
        return ExprNode::constant(t.value);
      case Tok::lparen: {
        advance();
        ExprNode inner = expr();
        expect_rparen(t.offset);
        return inner;
      }
      case Tok::ident: return identifier(t);
      case Tok::end: syntax(t.offset, "expected an operand, found end of input");
      default: syntax(t.offset, "expected an operand, found '" + std::string(t.text) + "'");
    }
  }

  ExprNode identifier(const Token& t) {
    static constexpr std::pair<std::string_view, Function> functions[] = {
        {"exp", Function::exp}, {"ln", Function::ln},   {"sqrt", Function::sqrt},
        {"sin", Function::sin}, {"cos", Function::cos}, {"abs", Function::abs}};
    for (const auto& [name, fn] : functions) {
      if (t.text == name) {
        advance();
        if (tok_.kind != Tok::lparen) syntax(tok_.offset, "expected '(' after " + std::string(name));
        const std::size_t open = tok_.offset;
        advance();
        ExprNode arg = expr();
        expect_rparen(open);
        return ExprNode::call(fn, std::move(arg));
      }
    }
    if (t.text == var_) {
      advance();
      return ExprNode::variable();
    }
    if (t.text == "u" || t.text == "t" || t.text == "s" || t.text == "x")
      fail(ParseErrorKind::wrong_variable, t.offset,
           "'" + std::string(t.text) + "' is not the free variable '" + std::string(var_) + "'");
    fail(ParseErrorKind::unknown_identifier, t.offset, "'" + std::string(t.text) + "'");
  }

  void expect_rparen(std::size_t open_offset) {
    if (tok_.kind != Tok::rparen)
      syntax(tok_.offset, "expected ')' to close '(' at offset " + std::to_string(open_offset));
    advance();
  }

  std::string_view src_;
  std::string_view var_;
  std::size_t pos_ = 0;
  Token tok_{Tok::end, 0, {}};
};

}  // namespace detail

/// Parses `source` as an expression in the single free variable `variable`.
inline ExprAst parse(std::string_view source, std::string_view variable) {
  if (variable.empty()) throw std::invalid_argument("parse: empty variable name");
  detail::Parser p(source, variable);
  return ExprAst(p.parse_all(), std::string(variable));
}

}  // namespace tpbvp
