// Compiled with -mavx2 only; reached solely through the runtime dispatcher.

#include <immintrin.h>

#include <cstddef>

#include "cfmm/kernels.hpp"

namespace cfmm::kernels::avx2 {

void phi_v2(double k, const double* r1, const double* r2, double* out, std::size_t n) noexcept {
  const __m256d kv = _mm256_set1_pd(k);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_loadu_pd(r1 + i);
    const __m256d b = _mm256_loadu_pd(r2 + i);
    _mm256_storeu_pd(out + i, _mm256_sqrt_pd(_mm256_div_pd(_mm256_mul_pd(a, b), kv)));
  }
  scalar::phi_v2(k, r1 + i, r2 + i, out + i, n - i);
}

void phi_v3(double alpha, double beta, double k, const double* r1, const double* r2, double* out,
            std::size_t n) noexcept {
  const double d = k - alpha * beta;
  const __m256d alpha_v = _mm256_set1_pd(alpha);
  const __m256d beta_v = _mm256_set1_pd(beta);
  const __m256d d_v = _mm256_set1_pd(d);
  const __m256d four_d = _mm256_set1_pd(4.0 * d);
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(r1 + i);
    const __m256d y = _mm256_loadu_pd(r2 + i);
    const __m256d a = _mm256_add_pd(_mm256_mul_pd(beta_v, x), _mm256_mul_pd(alpha_v, y));
    const __m256d disc =
        _mm256_add_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(_mm256_mul_pd(four_d, x), y));
    const __m256d s = _mm256_sqrt_pd(disc);
    _mm256_storeu_pd(out + i, _mm256_div_pd(_mm256_mul_pd(half, _mm256_add_pd(a, s)), d_v));
  }
  scalar::phi_v3(alpha, beta, k, r1 + i, r2 + i, out + i, n - i);
}

}  // namespace cfmm::kernels::avx2
