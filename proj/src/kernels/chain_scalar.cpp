#include "biconf/kernels.hpp"

namespace biconf::kernels::scalar {

void chain_unary(const double* ga, const double* ha, UnaryCoeffs c,
                 double* g_out, double* h_out) {
  for (int j = 0; j < kGradSize; ++j) g_out[j] = c.d1 * ga[j];
  for (int i = 0; i < kGradSize; ++i) {
    const double gi = ga[i];
    for (int j = 0; j < kGradSize; ++j) {
      const int k = i * kGradSize + j;
      h_out[k] = c.d1 * ha[k] + c.d2 * (gi * ga[j]);
    }
  }
}

void chain_binary(const double* ga, const double* ha, const double* gb,
                  const double* hb, BinaryCoeffs c, double* g_out,
                  double* h_out) {
  for (int j = 0; j < kGradSize; ++j) g_out[j] = c.da * ga[j] + c.db * gb[j];
  for (int i = 0; i < kGradSize; ++i) {
    const double gai = ga[i];
    const double gbi = gb[i];
    for (int j = 0; j < kGradSize; ++j) {
      const int k = i * kGradSize + j;
      double t = c.da * ha[k] + c.db * hb[k];
      t = t + c.daa * (gai * ga[j]);
      t = t + c.dab * (gai * gb[j] + gbi * ga[j]);
      t = t + c.dbb * (gbi * gb[j]);
      h_out[k] = t;
    }
  }
}

}  // namespace biconf::kernels::scalar
