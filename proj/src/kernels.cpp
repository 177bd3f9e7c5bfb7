#include "cfmm/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "cfmm/pools.hpp"

namespace cfmm::kernels {

#if defined(CFMM_HAVE_AVX2_TU)
namespace avx2 {
void phi_v2(double k, const double* r1, const double* r2, double* out, std::size_t n) noexcept;
void phi_v3(double alpha, double beta, double k, const double* r1, const double* r2, double* out,
            std::size_t n) noexcept;
}  // namespace avx2
#endif

#if defined(CFMM_HAVE_NEON_TU)
namespace neon {
void phi_v2(double k, const double* r1, const double* r2, double* out, std::size_t n) noexcept;
void phi_v3(double alpha, double beta, double k, const double* r1, const double* r2, double* out,
            std::size_t n) noexcept;
}  // namespace neon
#endif

namespace scalar {

void phi_v2(double k, const double* r1, const double* r2, double* out, std::size_t n) noexcept {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::sqrt(r1[i] * r2[i] / k);
}

// Operation order matches UniswapV3Tick::phi_closed and the vector variants.
void phi_v3(double alpha, double beta, double k, const double* r1, const double* r2, double* out,
            std::size_t n) noexcept {
  const double d = k - alpha * beta;
  const double four_d = 4.0 * d;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = beta * r1[i] + alpha * r2[i];
    const double s = std::sqrt(a * a + four_d * r1[i] * r2[i]);
    out[i] = 0.5 * (a + s) / d;
  }
}

}  // namespace scalar

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return true;
    case Isa::Avx2:
#if defined(CFMM_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::Neon:
#if defined(CFMM_HAVE_NEON_TU)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() noexcept {
  static const Isa chosen = [] {
    if (const char* env = std::getenv("CFMM_FORCE_SCALAR"); env && std::string(env) == "1") {
      return Isa::Scalar;
    }
    if (isa_available(Isa::Avx2)) return Isa::Avx2;
    if (isa_available(Isa::Neon)) return Isa::Neon;
    return Isa::Scalar;
  }();
  return chosen;
}

namespace {

void check_sizes(std::span<const double> r1, std::span<const double> r2, std::span<double> out) {
  require_dim(r1.size(), r2.size(), "kernels: r2");
  require_dim(r1.size(), out.size(), "kernels: out");
}

Isa usable(Isa isa) {
  if (!isa_available(isa)) {
    fail(ErrorCode::Unsupported, "kernels: ISA " + std::string(to_string(isa)) + " not available");
  }
  return isa;
}

}  // namespace

void phi_v2(double k, std::span<const double> r1, std::span<const double> r2,
            std::span<double> out, Isa isa) {
  check_sizes(r1, r2, out);
  switch (usable(isa)) {
#if defined(CFMM_HAVE_AVX2_TU)
    case Isa::Avx2: return avx2::phi_v2(k, r1.data(), r2.data(), out.data(), r1.size());
#endif
#if defined(CFMM_HAVE_NEON_TU)
    case Isa::Neon: return neon::phi_v2(k, r1.data(), r2.data(), out.data(), r1.size());
#endif
    default: return scalar::phi_v2(k, r1.data(), r2.data(), out.data(), r1.size());
  }
}

void phi_v3(double alpha, double beta, double k, std::span<const double> r1,
            std::span<const double> r2, std::span<double> out, Isa isa) {
  check_sizes(r1, r2, out);
  switch (usable(isa)) {
#if defined(CFMM_HAVE_AVX2_TU)
    case Isa::Avx2:
      return avx2::phi_v3(alpha, beta, k, r1.data(), r2.data(), out.data(), r1.size());
#endif
#if defined(CFMM_HAVE_NEON_TU)
    case Isa::Neon:
      return neon::phi_v3(alpha, beta, k, r1.data(), r2.data(), out.data(), r1.size());
#endif
    default: return scalar::phi_v3(alpha, beta, k, r1.data(), r2.data(), out.data(), r1.size());
  }
}

void phi_batch(const ReachableSet& pool, std::span<const double> r1, std::span<const double> r2,
               std::span<double> out, Isa isa) {
  require_dim(2, pool.dim(), "phi_batch");
  check_sizes(r1, r2, out);
  if (const auto* v2 = dynamic_cast<const UniswapV2*>(&pool)) {
    return phi_v2(v2->k(), r1, r2, out, isa);
  }
  if (const auto* v3 = dynamic_cast<const UniswapV3Tick*>(&pool)) {
    return phi_v3(v3->alpha(), v3->beta(), v3->k(), r1, r2, out, isa);
  }
  for (std::size_t i = 0; i < r1.size(); ++i) {
    const double r[2] = {r1[i], r2[i]};
    out[i] = phi(pool, r);
  }
}

}  // namespace cfmm::kernels
