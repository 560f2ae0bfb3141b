// Compiled with -mavx2 only; callers must check backend_available() first.
#include <immintrin.h>

#include "biconf/kernels.hpp"

namespace biconf::kernels::avx2 {

static_assert(kGradSize % 4 == 0, "rows must split into 256-bit lanes");

void chain_unary(const double* ga, const double* ha, UnaryCoeffs c,
                 double* g_out, double* h_out) {
  const __m256d d1 = _mm256_set1_pd(c.d1);
  const __m256d d2 = _mm256_set1_pd(c.d2);
  for (int j = 0; j < kGradSize; j += 4) {
    _mm256_storeu_pd(g_out + j, _mm256_mul_pd(d1, _mm256_loadu_pd(ga + j)));
  }
  for (int i = 0; i < kGradSize; ++i) {
    const __m256d gi = _mm256_set1_pd(ga[i]);
    for (int j = 0; j < kGradSize; j += 4) {
      const int k = i * kGradSize + j;
      const __m256d gj = _mm256_loadu_pd(ga + j);
      __m256d t = _mm256_mul_pd(d1, _mm256_loadu_pd(ha + k));
      t = _mm256_add_pd(t, _mm256_mul_pd(d2, _mm256_mul_pd(gi, gj)));
      _mm256_storeu_pd(h_out + k, t);
    }
  }
}

void chain_binary(const double* ga, const double* ha, const double* gb,
                  const double* hb, BinaryCoeffs c, double* g_out,
                  double* h_out) {
  const __m256d da = _mm256_set1_pd(c.da);
  const __m256d db = _mm256_set1_pd(c.db);
  const __m256d daa = _mm256_set1_pd(c.daa);
  const __m256d dab = _mm256_set1_pd(c.dab);
  const __m256d dbb = _mm256_set1_pd(c.dbb);
  for (int j = 0; j < kGradSize; j += 4) {
    const __m256d a = _mm256_mul_pd(da, _mm256_loadu_pd(ga + j));
    const __m256d b = _mm256_mul_pd(db, _mm256_loadu_pd(gb + j));
    _mm256_storeu_pd(g_out + j, _mm256_add_pd(a, b));
  }
  for (int i = 0; i < kGradSize; ++i) {
    const __m256d gai = _mm256_set1_pd(ga[i]);
    const __m256d gbi = _mm256_set1_pd(gb[i]);
    for (int j = 0; j < kGradSize; j += 4) {
      const int k = i * kGradSize + j;
      const __m256d gaj = _mm256_loadu_pd(ga + j);
      const __m256d gbj = _mm256_loadu_pd(gb + j);
      __m256d t = _mm256_add_pd(_mm256_mul_pd(da, _mm256_loadu_pd(ha + k)),
                                _mm256_mul_pd(db, _mm256_loadu_pd(hb + k)));
      t = _mm256_add_pd(t, _mm256_mul_pd(daa, _mm256_mul_pd(gai, gaj)));
      const __m256d cross = _mm256_add_pd(_mm256_mul_pd(gai, gbj),
                                          _mm256_mul_pd(gbi, gaj));
      t = _mm256_add_pd(t, _mm256_mul_pd(dab, cross));
      t = _mm256_add_pd(t, _mm256_mul_pd(dbb, _mm256_mul_pd(gbi, gbj)));
      _mm256_storeu_pd(h_out + k, t);
    }
  }
}

}  // namespace biconf::kernels::avx2
