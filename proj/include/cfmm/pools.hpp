#pragma once

// Reference pools with analytic trading functions. They double as oracles
// for the generic routines in reachable/duality.

#include <memory>
#include <optional>
#include <span>
#include <string>

#include "cfmm/reachable.hpp"

namespace cfmm {

/// Constant product: R1 R2 >= k.
class UniswapV2 final : public PsiSet {
 public:
  explicit UniswapV2(double k);

  double k() const noexcept { return k_; }
  double psi_level() const override { return k_; }
  std::optional<double> phi_closed(std::span<const double> r) const override;
  std::optional<Vector> grad_phi_closed(std::span<const double> r) const override;
  std::optional<PortfolioValue> pv_closed(std::span<const double> c,
                                          const Tolerance& tol) const override;
  std::string describe() const override;

 protected:
  double psi_value(std::span<const double> r) const override { return r[0] * r[1]; }

 private:
  double k_;
};

/// A single concentrated-liquidity tick: (R1 + alpha)(R2 + beta) >= k, k > alpha beta.
class UniswapV3Tick final : public PsiSet {
 public:
  UniswapV3Tick(double alpha, double beta, double k);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double k() const noexcept { return k_; }
  double psi_level() const override { return k_; }
  std::optional<double> phi_closed(std::span<const double> r) const override;
  std::optional<Vector> grad_phi_closed(std::span<const double> r) const override;
  std::optional<PortfolioValue> pv_closed(std::span<const double> c,
                                          const Tolerance& tol) const override;
  std::string describe() const override;

 protected:
  double psi_value(std::span<const double> r) const override {
    return (r[0] + alpha_) * (r[1] + beta_);
  }

 private:
  double alpha_;
  double beta_;
  double k_;
};

/// Two-asset stableswap-style set: R1 + R2 - alpha / (R1 R2) >= k.
class CurveTwoAsset final : public PsiSet {
 public:
  CurveTwoAsset(double alpha, double k);

  double alpha() const noexcept { return alpha_; }
  double k() const noexcept { return k_; }
  double psi_level() const override { return k_; }
  std::optional<double> phi_closed(std::span<const double> r) const override;
  std::optional<Vector> grad_phi_closed(std::span<const double> r) const override;
  std::string describe() const override;

 protected:
  double psi_value(std::span<const double> r) const override;

 private:
  double alpha_;
  double k_;
};

/// Reachable set behind the logarithmic market scoring rule:
/// sum_i exp(-R_i / b) <= 1. phi has no closed form.
class LMSRSet final : public PsiSet {
 public:
  LMSRSet(double b, std::size_t n);

  double b() const noexcept { return b_; }
  double psi_level() const override { return -1.0; }
  std::string describe() const override;

 protected:
  double psi_value(std::span<const double> r) const override;

 private:
  double b_;
};

std::shared_ptr<const UniswapV2> make_uniswap_v2(double k);
std::shared_ptr<const UniswapV3Tick> make_uniswap_v3_tick(double alpha, double beta, double k);
std::shared_ptr<const CurveTwoAsset> make_curve(double alpha, double k);
std::shared_ptr<const LMSRSet> make_lmsr(double b, std::size_t n);

/// Exact canonical trading function; pools without one fall back to bisection.
double pool_phi_closed(const ReachableSet& pool, std::span<const double> reserves);

/// Exact portfolio value. Raises Unsupported for pools without a closed form.
double pool_pv_closed(const ReachableSet& pool, std::span<const double> prices);

/// Exact gradient of phi. Raises Unsupported for pools without a closed form.
Vector pool_grad_phi(const ReachableSet& pool, std::span<const double> reserves);

/// Largest positive root of -alpha l^3 - k P l + P S = 0 with P = R1 R2,
/// S = R1 + R2, via Cardano's radicals. Empty when the radical branch is not
/// real or fails the residual check.
std::optional<double> curve_cubic_radical(double alpha, double k, double r1, double r2);

}  // namespace cfmm
