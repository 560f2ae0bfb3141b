#include "biconf/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <system_error>
#include <variant>
#include <vector>

#include "biconf/errors.hpp"

namespace biconf {

struct Expr::Node {
  struct Literal {
    double value;
  };
  struct Var {
    int index;
  };
  struct Neg {
    std::shared_ptr<const Node> child;
  };
  struct Binary {
    BinaryOp op;
    std::shared_ptr<const Node> lhs, rhs;
  };
  struct Call {
    Function fn;
    std::shared_ptr<const Node> arg;
  };
  std::variant<Literal, Var, Neg, Binary, Call> v;
};

namespace {

using Node = Expr::Node;
using NodePtr = std::shared_ptr<const Node>;

const char* function_name(Function fn) {
  switch (fn) {
    case Function::kSin:
      return "sin";
    case Function::kCos:
      return "cos";
    case Function::kExp:
      return "exp";
    case Function::kLog:
      return "log";
    case Function::kSqrt:
      return "sqrt";
  }
  return "?";
}

const char* op_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::kAdd:
      return " + ";
    case BinaryOp::kSub:
      return " - ";
    case BinaryOp::kMul:
      return " * ";
    case BinaryOp::kDiv:
      return " / ";
    case BinaryOp::kPow:
      return " ^ ";
  }
  return " ? ";
}

std::string format_literal(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void print(const Node& n, std::string& out) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Node::Literal>) {
          out += format_literal(x.value);
        } else if constexpr (std::is_same_v<T, Node::Var>) {
          out += "x" + std::to_string(x.index + 1);
        } else if constexpr (std::is_same_v<T, Node::Neg>) {
          out += "(-";
          print(*x.child, out);
          out += ")";
        } else if constexpr (std::is_same_v<T, Node::Binary>) {
          out += "(";
          print(*x.lhs, out);
          out += op_symbol(x.op);
          print(*x.rhs, out);
          out += ")";
        } else {
          out += function_name(x.fn);
          out += "(";
          print(*x.arg, out);
          out += ")";
        }
      },
      n.v);
}

std::string text_of(const Node& n) {
  std::string s;
  print(n, s);
  return s;
}

bool equal(const Node& a, const Node& b) {
  if (&a == &b) return true;
  if (a.v.index() != b.v.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.v);
        if constexpr (std::is_same_v<T, Node::Literal>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, Node::Var>) {
          return x.index == y.index;
        } else if constexpr (std::is_same_v<T, Node::Neg>) {
          return equal(*x.child, *y.child);
        } else if constexpr (std::is_same_v<T, Node::Binary>) {
          return x.op == y.op && equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
        } else {
          return x.fn == y.fn && equal(*x.arg, *y.arg);
        }
      },
      a.v);
}

int max_var(const Node& n) {
  return std::visit(
      [](const auto& x) -> int {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Node::Literal>) {
          return -1;
        } else if constexpr (std::is_same_v<T, Node::Var>) {
          return x.index;
        } else if constexpr (std::is_same_v<T, Node::Neg>) {
          return max_var(*x.child);
        } else if constexpr (std::is_same_v<T, Node::Binary>) {
          return std::max(max_var(*x.lhs), max_var(*x.rhs));
        } else {
          return max_var(*x.arg);
        }
      },
      n.v);
}

// ---- evaluation ----------------------------------------------------------

double apply(Function fn, double a) {
  switch (fn) {
    case Function::kSin:
      return std::sin(a);
    case Function::kCos:
      return std::cos(a);
    case Function::kExp:
      return std::exp(a);
    case Function::kLog:
      if (!(a > 0.0)) throw DomainError("argument " + format_literal(a) + " is not positive");
      return std::log(a);
    case Function::kSqrt:
      if (!(a > 0.0)) throw DomainError("argument " + format_literal(a) + " is not positive");
      return std::sqrt(a);
  }
  return 0.0;
}

Jet2 apply(Function fn, const Jet2& a) {
  switch (fn) {
    case Function::kSin:
      return sin(a);
    case Function::kCos:
      return cos(a);
    case Function::kExp:
      return exp(a);
    case Function::kLog:
      return log(a);
    case Function::kSqrt:
      return sqrt(a);
  }
  return a;
}

double apply(BinaryOp op, double a, double b) {
  switch (op) {
    case BinaryOp::kAdd:
      return a + b;
    case BinaryOp::kSub:
      return a - b;
    case BinaryOp::kMul:
      return a * b;
    case BinaryOp::kDiv:
      if (b == 0.0) throw DomainError("division by zero");
      return a / b;
    case BinaryOp::kPow: {
      if (std::nearbyint(b) != b && !(a > 0.0)) {
        throw DomainError("base " + format_literal(a) +
                          " is not positive for non-integer exponent");
      }
      if (std::nearbyint(b) == b && b < 0 && a == 0.0) {
        throw DomainError("zero base with negative exponent");
      }
      return std::pow(a, b);
    }
  }
  return 0.0;
}

Jet2 apply(BinaryOp op, const Jet2& a, const Jet2& b) {
  return jet_binary(op, a, b);
}

Jet2 make_constant(double v, std::span<const Jet2> coords) {
  return Jet2::constant(v, coords.empty() ? 0 : coords.front().dim);
}
double make_constant(double v, std::span<const double>) { return v; }

template <class T>
T evaluate(const Node& n, std::span<const T> coords) {
  return std::visit(
      [&](const auto& x) -> T {
        using K = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<K, Node::Literal>) {
          return make_constant(x.value, coords);
        } else if constexpr (std::is_same_v<K, Node::Var>) {
          if (x.index >= static_cast<int>(coords.size())) {
            throw std::invalid_argument(
                "x" + std::to_string(x.index + 1) +
                " exceeds chart dimension " + std::to_string(coords.size()));
          }
          return coords[x.index];
        } else if constexpr (std::is_same_v<K, Node::Neg>) {
          return -evaluate(*x.child, coords);
        } else {
          // Domain errors are tagged with the innermost failing node only.
          if constexpr (std::is_same_v<K, Node::Binary>) {
            T lhs = evaluate(*x.lhs, coords);
            T rhs = evaluate(*x.rhs, coords);
            try {
              return apply(x.op, lhs, rhs);
            } catch (const DomainError& e) {
              throw DomainError(text_of(n) + ": " + e.what());
            }
          } else {
            T arg = evaluate(*x.arg, coords);
            try {
              return apply(x.fn, arg);
            } catch (const DomainError& e) {
              throw DomainError(text_of(n) + ": " + e.what());
            }
          }
        }
      },
      n.v);
}

// ---- parsing -------------------------------------------------------------

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse_all() {
    skip_ws();
    if (pos_ == text_.size()) syntax("empty expression");
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) syntax(unexpected());
    return e;
  }

 private:
  [[noreturn]] void fail(ParseError::Kind kind, std::size_t at,
                         const std::string& msg) {
    throw ParseError(kind, at, msg);
  }
  [[noreturn]] void syntax(const std::string& msg) {
    fail(ParseError::Kind::kSyntax, pos_, msg);
  }

  std::string unexpected() const {
    if (pos_ >= text_.size()) return "unexpected end of input";
    return std::string("unexpected '") + text_[pos_] + "'";
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  static NodePtr make(Node::Binary b) {
    return std::make_shared<const Node>(Node{std::move(b)});
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = make({BinaryOp::kAdd, lhs, parse_term()});
      } else if (accept('-')) {
        lhs = make({BinaryOp::kSub, lhs, parse_term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make({BinaryOp::kMul, lhs, parse_unary()});
      } else if (accept('/')) {
        lhs = make({BinaryOp::kDiv, lhs, parse_unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) {
      return std::make_shared<const Node>(Node{Node::Neg{parse_unary()}});
    }
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (accept('^')) return make({BinaryOp::kPow, base, parse_unary()});
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) syntax("expected operand, found end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      if (!accept(')')) syntax("expected ')', " + unexpected());
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return parse_number();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      return parse_identifier();
    }
    syntax("expected operand, " + unexpected());
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    std::size_t end = pos_;
    auto digits = [&] {
      while (end < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[end]))) {
        ++end;
      }
    };
    digits();
    if (end < text_.size() && text_[end] == '.') {
      ++end;
      digits();
    }
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      std::size_t exp_end = end + 1;
      if (exp_end < text_.size() &&
          (text_[exp_end] == '+' || text_[exp_end] == '-')) {
        ++exp_end;
      }
      if (exp_end < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[exp_end]))) {
        end = exp_end;
        digits();
      }
    }
    double value = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + end;
    auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc() || res.ptr != last) {
      fail(ParseError::Kind::kSyntax, start, "malformed number");
    }
    pos_ = end;
    return std::make_shared<const Node>(Node{Node::Literal{value}});
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      const Function fn = lookup_function(name, start);
      ++pos_;
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == ')') {
        fail(ParseError::Kind::kArity, start,
             std::string(name) + " expects 1 argument, got 0");
      }
      NodePtr arg = parse_expr();
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == ',') {
        fail(ParseError::Kind::kArity, start,
             std::string(name) + " expects 1 argument, got more");
      }
      if (!accept(')')) syntax("expected ')', " + unexpected());
      return std::make_shared<const Node>(Node{Node::Call{fn, arg}});
    }
    if (name.size() == 2 && name[0] == 'x' && name[1] >= '1' && name[1] <= '9') {
      return std::make_shared<const Node>(Node{Node::Var{name[1] - '1'}});
    }
    fail(ParseError::Kind::kUnknownIdentifier, start,
         "unknown identifier '" + std::string(name) + "'");
  }

  Function lookup_function(std::string_view name, std::size_t at) {
    if (name == "sin") return Function::kSin;
    if (name == "cos") return Function::kCos;
    if (name == "exp") return Function::kExp;
    if (name == "log") return Function::kLog;
    if (name == "sqrt") return Function::kSqrt;
    fail(ParseError::Kind::kUnknownIdentifier, at,
         "unknown function '" + std::string(name) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr Expr::parse(std::string_view text) { return Expr(Parser(text).parse_all()); }

Expr Expr::literal(double value) {
  return Expr(std::make_shared<const Node>(Node{Node::Literal{value}}));
}

Expr Expr::var(int index) {
  if (index < 0 || index > 8) throw std::invalid_argument("variable index outside x1..x9");
  return Expr(std::make_shared<const Node>(Node{Node::Var{index}}));
}

Expr Expr::negate(Expr child) {
  return Expr(std::make_shared<const Node>(Node{Node::Neg{child.node_}}));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  return Expr(std::make_shared<const Node>(
      Node{Node::Binary{op, lhs.node_, rhs.node_}}));
}

Expr Expr::call(Function fn, Expr arg) {
  return Expr(std::make_shared<const Node>(Node{Node::Call{fn, arg.node_}}));
}

double Expr::eval(std::span<const double> coords) const {
  return evaluate<double>(*node_, coords);
}

Jet2 Expr::eval_jet(std::span<const Jet2> coords) const {
  return evaluate<Jet2>(*node_, coords);
}

std::string Expr::to_string() const { return text_of(*node_); }

int Expr::max_var_index() const { return max_var(*node_); }

bool operator==(const Expr& a, const Expr& b) { return equal(*a.node_, *b.node_); }

Expr operator*(const Expr& a, const Expr& b) {
  return Expr::binary(BinaryOp::kMul, a, b);
}
Expr operator/(const Expr& a, const Expr& b) {
  return Expr::binary(BinaryOp::kDiv, a, b);
}
Expr pow(const Expr& base, double exponent) {
  return Expr::binary(BinaryOp::kPow, base, Expr::literal(exponent));
}
Expr log(const Expr& a) { return Expr::call(Function::kLog, a); }

}  // namespace biconf
