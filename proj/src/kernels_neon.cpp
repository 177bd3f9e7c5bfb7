// aarch64 variant; float64x2 lanes, same operation order as the scalar path.

#include <arm_neon.h>

#include <cstddef>

#include "cfmm/kernels.hpp"

namespace cfmm::kernels::neon {

void phi_v2(double k, const double* r1, const double* r2, double* out, std::size_t n) noexcept {
  const float64x2_t kv = vdupq_n_f64(k);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t a = vld1q_f64(r1 + i);
    const float64x2_t b = vld1q_f64(r2 + i);
    vst1q_f64(out + i, vsqrtq_f64(vdivq_f64(vmulq_f64(a, b), kv)));
  }
  scalar::phi_v2(k, r1 + i, r2 + i, out + i, n - i);
}

void phi_v3(double alpha, double beta, double k, const double* r1, const double* r2, double* out,
            std::size_t n) noexcept {
  const double d = k - alpha * beta;
  const float64x2_t alpha_v = vdupq_n_f64(alpha);
  const float64x2_t beta_v = vdupq_n_f64(beta);
  const float64x2_t d_v = vdupq_n_f64(d);
  const float64x2_t four_d = vdupq_n_f64(4.0 * d);
  const float64x2_t half = vdupq_n_f64(0.5);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t x = vld1q_f64(r1 + i);
    const float64x2_t y = vld1q_f64(r2 + i);
    const float64x2_t a = vaddq_f64(vmulq_f64(beta_v, x), vmulq_f64(alpha_v, y));
    const float64x2_t disc = vaddq_f64(vmulq_f64(a, a), vmulq_f64(vmulq_f64(four_d, x), y));
    const float64x2_t s = vsqrtq_f64(disc);
    vst1q_f64(out + i, vdivq_f64(vmulq_f64(half, vaddq_f64(a, s)), d_v));
  }
  scalar::phi_v3(alpha, beta, k, r1 + i, r2 + i, out + i, n - i);
}

}  // namespace cfmm::kernels::neon
