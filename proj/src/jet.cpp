#include "biconf/jet.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "biconf/errors.hpp"
#include "biconf/kernels.hpp"

namespace biconf {
namespace {

int merged_dim(const Jet2& a, const Jet2& b) {
  if (a.dim != 0 && b.dim != 0 && a.dim != b.dim) {
    throw std::invalid_argument("jet dimension mismatch: " +
                                std::to_string(a.dim) + " vs " +
                                std::to_string(b.dim));
  }
  return a.dim > b.dim ? a.dim : b.dim;
}

Jet2 checked(Jet2 out, const char* op) {
  if (!out.is_finite()) {
    throw DomainError(std::string("non-finite jet component produced by ") +
                      op);
  }
  return out;
}

Jet2 unary(const Jet2& a, double value, kernels::UnaryCoeffs c,
           const char* op) {
  Jet2 out;
  out.value = value;
  out.dim = a.dim;
  kernels::chain_unary(a.grad.data(), a.hess.data(), c, out.grad.data(),
                       out.hess.data());
  return checked(out, op);
}

Jet2 binary(const Jet2& a, const Jet2& b, double value,
            kernels::BinaryCoeffs c, const char* op) {
  Jet2 out;
  out.value = value;
  out.dim = merged_dim(a, b);
  kernels::chain_binary(a.grad.data(), a.hess.data(), b.grad.data(),
                        b.hess.data(), c, out.grad.data(), out.hess.data());
  return checked(out, op);
}

bool has_derivatives(const Jet2& a) {
  for (double g : a.grad) {
    if (g != 0.0) return true;
  }
  for (double h : a.hess) {
    if (h != 0.0) return true;
  }
  return false;
}

bool is_integer(double x) {
  return std::isfinite(x) && std::nearbyint(x) == x &&
         std::abs(x) < static_cast<double>(std::numeric_limits<int>::max());
}

Jet2 power_constant_exponent(const Jet2& a, double e) {
  if (is_integer(e)) return ipow(a, static_cast<int>(e));
  if (!(a.value > 0.0)) {
    throw DomainError("pow: base " + std::to_string(a.value) +
                      " is not positive for non-integer exponent");
  }
  const double v = std::pow(a.value, e);
  return unary(a, v, {e * v / a.value, e * (e - 1.0) * v / (a.value * a.value)},
               "pow");
}

}  // namespace

Jet2 Jet2::constant(double v, int dim) {
  Jet2 j(v);
  j.dim = dim;
  return j;
}

Jet2 Jet2::variable(double v, int index, int dim) {
  if (index < 0 || index >= dim || dim > kMaxJetDim) {
    throw std::invalid_argument("jet variable index out of range");
  }
  Jet2 j = constant(v, dim);
  j.grad[index] = 1.0;
  return j;
}

bool Jet2::is_finite() const {
  if (!std::isfinite(value)) return false;
  for (double g : grad) {
    if (!std::isfinite(g)) return false;
  }
  for (double h : hess) {
    if (!std::isfinite(h)) return false;
  }
  return true;
}

std::vector<Jet2> seed_coordinates(std::span<const double> coords) {
  const int d = static_cast<int>(coords.size());
  if (d < 1 || d > kMaxJetDim) {
    throw std::invalid_argument("seed_coordinates: dimension " +
                                std::to_string(d) + " outside [1, " +
                                std::to_string(kMaxJetDim) + "]");
  }
  std::vector<Jet2> out;
  out.reserve(coords.size());
  for (int k = 0; k < d; ++k) out.push_back(Jet2::variable(coords[k], k, d));
  return out;
}

Jet2 jet_unary(UnaryOp op, const Jet2& a) {
  const double x = a.value;
  switch (op) {
    case UnaryOp::kNeg:
      return unary(a, -x, {-1.0, 0.0}, "neg");
    case UnaryOp::kSin:
      return unary(a, std::sin(x), {std::cos(x), -std::sin(x)}, "sin");
    case UnaryOp::kCos:
      return unary(a, std::cos(x), {-std::sin(x), -std::cos(x)}, "cos");
    case UnaryOp::kExp: {
      const double e = std::exp(x);
      return unary(a, e, {e, e}, "exp");
    }
    case UnaryOp::kLog:
      if (!(x > 0.0)) {
        throw DomainError("log: argument " + std::to_string(x) +
                          " is not positive");
      }
      return unary(a, std::log(x), {1.0 / x, -1.0 / (x * x)}, "log");
    case UnaryOp::kSqrt: {
      if (!(x > 0.0)) {
        throw DomainError("sqrt: argument " + std::to_string(x) +
                          " is not positive");
      }
      const double s = std::sqrt(x);
      return unary(a, s, {0.5 / s, -0.25 / (x * s)}, "sqrt");
    }
  }
  throw std::invalid_argument("unknown unary op");
}

Jet2 jet_binary(BinaryOp op, const Jet2& a, const Jet2& b) {
  const double x = a.value;
  const double y = b.value;
  switch (op) {
    case BinaryOp::kAdd:
      return binary(a, b, x + y, {1.0, 1.0, 0.0, 0.0, 0.0}, "add");
    case BinaryOp::kSub:
      return binary(a, b, x - y, {1.0, -1.0, 0.0, 0.0, 0.0}, "sub");
    case BinaryOp::kMul:
      return binary(a, b, x * y, {y, x, 0.0, 1.0, 0.0}, "mul");
    case BinaryOp::kDiv: {
      if (y == 0.0) throw DomainError("division by zero");
      const double inv = 1.0 / y;
      const double inv2 = inv * inv;
      return binary(a, b, x * inv, {inv, -x * inv2, 0.0, -inv2, 2.0 * x * inv2 * inv},
                    "div");
    }
    case BinaryOp::kPow: {
      if (!has_derivatives(b)) {
        merged_dim(a, b);
        Jet2 out = power_constant_exponent(a, y);
        if (out.dim == 0) out.dim = b.dim;
        return out;
      }
      if (!(x > 0.0)) {
        throw DomainError("pow: base " + std::to_string(x) +
                          " is not positive for variable exponent");
      }
      const double v = std::pow(x, y);
      const double lx = std::log(x);
      const double vx = v / x;
      return binary(a, b, v,
                    {y * vx, v * lx, y * (y - 1.0) * vx / x,
                     vx * (1.0 + y * lx), v * lx * lx},
                    "pow");
    }
  }
  throw std::invalid_argument("unknown binary op");
}

Jet2 operator-(const Jet2& a) { return jet_unary(UnaryOp::kNeg, a); }
Jet2 operator+(const Jet2& a, const Jet2& b) {
  return jet_binary(BinaryOp::kAdd, a, b);
}
Jet2 operator-(const Jet2& a, const Jet2& b) {
  return jet_binary(BinaryOp::kSub, a, b);
}
Jet2 operator*(const Jet2& a, const Jet2& b) {
  return jet_binary(BinaryOp::kMul, a, b);
}
Jet2 operator/(const Jet2& a, const Jet2& b) {
  return jet_binary(BinaryOp::kDiv, a, b);
}

Jet2 sin(const Jet2& a) { return jet_unary(UnaryOp::kSin, a); }
Jet2 cos(const Jet2& a) { return jet_unary(UnaryOp::kCos, a); }
Jet2 exp(const Jet2& a) { return jet_unary(UnaryOp::kExp, a); }
Jet2 log(const Jet2& a) { return jet_unary(UnaryOp::kLog, a); }
Jet2 sqrt(const Jet2& a) { return jet_unary(UnaryOp::kSqrt, a); }

Jet2 pow(const Jet2& a, const Jet2& b) {
  return jet_binary(BinaryOp::kPow, a, b);
}

Jet2 pow(const Jet2& a, double exponent) {
  return power_constant_exponent(a, exponent);
}

Jet2 ipow(const Jet2& a, int exponent) {
  if (exponent == 0) return Jet2::constant(1.0, a.dim);
  if (exponent < 0) {
    if (a.value == 0.0) throw DomainError("pow: zero base with negative exponent");
    return Jet2::constant(1.0, a.dim) / ipow(a, -exponent);
  }
  Jet2 result;
  bool have = false;
  Jet2 base = a;
  unsigned k = static_cast<unsigned>(exponent);
  while (k != 0) {
    if (k & 1U) {
      result = have ? result * base : base;
      have = true;
    }
    k >>= 1U;
    if (k != 0) base = base * base;
  }
  return result;
}

}  // namespace biconf
