#pragma once

// Batch evaluation of closed-form trading functions over structure-of-arrays
// reserve batches. A scalar reference implementation is always built; vector
// variants (AVX2 on x86-64, NEON on aarch64) are picked at runtime and must
// agree with the scalar path bit for bit, since all variants perform the same
// IEEE operations in the same order without contraction.
//
// Set CFMM_FORCE_SCALAR=1 in the environment to pin the scalar path.

#include <span>
#include <string_view>

#include "cfmm/reachable.hpp"

namespace cfmm::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view to_string(Isa isa) noexcept;

/// Whether this binary carries code for `isa` and the CPU can run it.
bool isa_available(Isa isa) noexcept;

/// Best available ISA, or Scalar when CFMM_FORCE_SCALAR is set. Cached.
Isa active_isa() noexcept;

/// out[i] = sqrt(r1[i] r2[i] / k)
void phi_v2(double k, std::span<const double> r1, std::span<const double> r2,
            std::span<double> out, Isa isa = active_isa());

/// Closed-form canonical trading function of a v3 tick, elementwise.
void phi_v3(double alpha, double beta, double k, std::span<const double> r1,
            std::span<const double> r2, std::span<double> out, Isa isa = active_isa());

/// Batch phi for any two-asset pool: v2 and v3 ticks go through the kernels
/// above, every other set through its scalar phi.
void phi_batch(const ReachableSet& pool, std::span<const double> r1, std::span<const double> r2,
               std::span<double> out, Isa isa = active_isa());

namespace scalar {
void phi_v2(double k, const double* r1, const double* r2, double* out, std::size_t n) noexcept;
void phi_v3(double alpha, double beta, double k, const double* r1, const double* r2, double* out,
            std::size_t n) noexcept;
}  // namespace scalar

}  // namespace cfmm::kernels
