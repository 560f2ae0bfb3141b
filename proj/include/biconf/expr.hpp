#pragma once

// Scalar-field expressions over chart coordinates x1..x9.
//
// Grammar, loosest binding first:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | 'x'[1-9] | func '(' expr ')' | '(' expr ')'
//   func    := sin | cos | exp | log | sqrt
// There is no implicit multiplication: "2x1" is a syntax error.

#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "biconf/jet.hpp"

namespace biconf {

enum class Function { kSin, kCos, kExp, kLog, kSqrt };

class Expr {
 public:
  struct Node;

  // Throws ParseError carrying the byte offset of the offending token.
  static Expr parse(std::string_view text);

  static Expr literal(double value);
  // Zero-based coordinate index: var(0) prints as x1.
  static Expr var(int index);
  static Expr negate(Expr child);
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);
  static Expr call(Function fn, Expr arg);

  double eval(std::span<const double> coords) const;
  // Domain failures are rethrown as DomainError naming the failing node.
  Jet2 eval_jet(std::span<const Jet2> coords) const;

  // Canonical form: binary nodes fully parenthesized, literals in shortest
  // round-trip notation. parse(to_string()) reproduces the same tree.
  std::string to_string() const;

  // Largest zero-based variable index, or -1 for a constant expression.
  int max_var_index() const;
  bool is_constant() const { return max_var_index() < 0; }

  const Node& node() const { return *node_; }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr pow(const Expr& base, double exponent);
Expr log(const Expr& a);

}  // namespace biconf
