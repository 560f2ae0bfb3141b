#pragma once

// Dense update kernels behind every jet operation.
//
// All arrays are padded: gradients hold kMaxJetDim doubles, Hessians
// kMaxJetDim * kMaxJetDim doubles in row-major order. For a composed
// quantity f(a) or f(a, b) the kernels write
//
//   grad = da*ga + db*gb
//   hess = da*Ha + db*Hb + daa*ga ga^T + dab*(ga gb^T + gb ga^T) + dbb*gb gb^T
//
// Every backend evaluates each entry with the same sequence of IEEE
// operations, so results are bit-identical across backends and the Hessian
// stays exactly symmetric.

#include <string_view>

#include "biconf/jet.hpp"

namespace biconf::kernels {

inline constexpr int kGradSize = kMaxJetDim;
inline constexpr int kHessSize = kMaxJetDim * kMaxJetDim;

struct UnaryCoeffs {
  double d1;  // f'(a)
  double d2;  // f''(a)
};

struct BinaryCoeffs {
  double da, db;
  double daa, dab, dbb;
};

enum class Backend { kScalar, kAvx2 };

namespace scalar {
void chain_unary(const double* ga, const double* ha, UnaryCoeffs c,
                 double* g_out, double* h_out);
void chain_binary(const double* ga, const double* ha, const double* gb,
                  const double* hb, BinaryCoeffs c, double* g_out,
                  double* h_out);
}  // namespace scalar

#if defined(BICONF_HAVE_AVX2)
namespace avx2 {
void chain_unary(const double* ga, const double* ha, UnaryCoeffs c,
                 double* g_out, double* h_out);
void chain_binary(const double* ga, const double* ha, const double* gb,
                  const double* hb, BinaryCoeffs c, double* g_out,
                  double* h_out);
}  // namespace avx2
#endif

// Compiled in and supported by the running CPU.
bool backend_available(Backend b);
Backend active_backend();
// Not synchronized with in-flight evaluations; call before starting work.
// Throws std::invalid_argument for an unavailable backend.
void set_backend(Backend b);
std::string_view backend_name(Backend b);

void chain_unary(const double* ga, const double* ha, UnaryCoeffs c,
                 double* g_out, double* h_out);
void chain_binary(const double* ga, const double* ha, const double* gb,
                  const double* hb, BinaryCoeffs c, double* g_out,
                  double* h_out);

}  // namespace biconf::kernels
