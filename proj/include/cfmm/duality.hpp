#pragma once

// Conic duality between reachable sets and portfolio value functions.
//
// The liquidity cone K is the closure of {(R, l) : R/l in S, l > 0}. Its dual
// cone is {(c, eta) : c >= 0, V(c) + eta >= 0}, so V determines S and vice
// versa. The transforms below move between the two descriptions numerically.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>

#include "cfmm/reachable.hpp"

namespace cfmm {

struct DualConePoint {
  PriceVector price;
  double offset = 0.0;
};

/// A portfolio value function c -> V(c); expected consistent (nondecreasing,
/// 1-homogeneous, concave).
struct PortfolioValueFn {
  std::size_t dim = 0;
  std::function<double(std::span<const double>)> eval;

  double operator()(std::span<const double> c) const { return eval(c); }
};

/// A canonical trading function R -> phi(R); expected concave, 1-homogeneous, nondecreasing.
struct TradingFn {
  std::size_t dim = 0;
  std::function<double(std::span<const double>)> eval;

  double operator()(std::span<const double> r) const { return eval(r); }
};

/// V of a set, via its closed form or the generic transform.
PortfolioValueFn portfolio_value_fn(SetPtr set, const Tolerance& tol = {});

/// phi of a set, via its closed form or bisection.
TradingFn trading_fn(SetPtr set, const Tolerance& tol = {});

bool cone_contains(const ReachableSet& set, const LiquidityConePoint& point);

bool dual_cone_contains(const PortfolioValueFn& value, const DualConePoint& point);

/// V(c) = inf_{R > 0} c^T R / phi(R), searched over the reserve simplex.
double pv_from_phi(const TradingFn& phi, std::span<const double> prices, const Tolerance& tol = {});

/// phi(R) = inf_{c > 0} c^T R / V(c), searched over the price simplex.
double phi_from_pv(const PortfolioValueFn& value, std::span<const double> reserves,
                   const Tolerance& tol = {});

/// Minimum over the price simplex of c^T R - V(c). Nonnegative iff R is
/// reachable (up to the tolerance `membership_slack`).
struct Phi0 {
  double value = 0.0;
  PriceVector argmin;
};
Phi0 rmm_phi0(const PortfolioValueFn& value, std::span<const double> reserves,
              const Tolerance& tol = {});

/// Slack below which rmm_phi0 still counts as a membership witness.
double rmm_membership_slack(std::span<const double> reserves);

/// Prices proving R is not reachable: (c, -V(c)) lies in the dual cone while
/// c^T R - V(c) = -gap < 0 with gap above rmm_membership_slack. Empty when R
/// is in the set.
struct SeparationCertificate {
  PriceVector price;
  double gap = 0.0;
};
std::optional<SeparationCertificate> separation_certificate(SetPtr set,
                                                            std::span<const double> reserves,
                                                            const Tolerance& tol = {});

}  // namespace cfmm
