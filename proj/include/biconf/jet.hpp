#pragma once

// Second-order forward-mode jets: value, gradient and Hessian of a scalar
// with respect to the chart coordinates it was seeded from.

#include <array>
#include <span>
#include <vector>

namespace biconf {

inline constexpr int kMaxJetDim = 8;

struct Jet2 {
  double value = 0.0;
  // Number of live coordinates. Zero marks a pure constant that broadcasts
  // against jets of any dimension.
  int dim = 0;
  // Padded to kMaxJetDim; entries past `dim` are always zero.
  alignas(32) std::array<double, kMaxJetDim> grad{};
  alignas(32) std::array<double, kMaxJetDim * kMaxJetDim> hess{};

  Jet2() = default;
  Jet2(double v) : value(v) {}  // NOLINT: constants convert implicitly

  static Jet2 constant(double v, int dim);
  static Jet2 variable(double v, int index, int dim);

  double h(int i, int j) const { return hess[i * kMaxJetDim + j]; }
  double& h(int i, int j) { return hess[i * kMaxJetDim + j]; }

  bool is_finite() const;
};

enum class UnaryOp { kNeg, kSin, kCos, kExp, kLog, kSqrt };
enum class BinaryOp { kAdd, kSub, kMul, kDiv, kPow };

// k-th jet has value coords[k], gradient e_k and zero Hessian.
// Throws std::invalid_argument when coords is empty or longer than kMaxJetDim.
std::vector<Jet2> seed_coordinates(std::span<const double> coords);

Jet2 jet_unary(UnaryOp op, const Jet2& a);
Jet2 jet_binary(BinaryOp op, const Jet2& a, const Jet2& b);

Jet2 operator-(const Jet2& a);
Jet2 operator+(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a, const Jet2& b);
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator/(const Jet2& a, const Jet2& b);

Jet2 sin(const Jet2& a);
Jet2 cos(const Jet2& a);
Jet2 exp(const Jet2& a);
Jet2 log(const Jet2& a);
Jet2 sqrt(const Jet2& a);
// Integer exponents go through repeated multiplication and accept any
// non-zero base; other exponents require a positive base.
Jet2 pow(const Jet2& a, const Jet2& b);
Jet2 pow(const Jet2& a, double exponent);
Jet2 ipow(const Jet2& a, int exponent);

}  // namespace biconf
