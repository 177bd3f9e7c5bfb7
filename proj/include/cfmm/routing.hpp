#pragma once

// Optimal routing across several trading sets through the dual problem
//
//   minimize  Ubar(nu) + sum_i arb_i(A_i^T nu)
//
// where Ubar is the conjugate of the utility. The primal trades are read off
// as the arbitrage solutions at the optimal nu.

#include <cstddef>
#include <vector>

#include "cfmm/compose.hpp"
#include "cfmm/trade.hpp"

namespace cfmm {

/// Linear utilities c^T Psi. `Arbitrage` adds Psi >= 0 (take nothing out of
/// the network), so Ubar = 0 on nu >= c; `Linear` is unconstrained and Ubar
/// is finite only at nu = c.
struct UtilitySpec {
  enum class Kind { Arbitrage, Linear };
  Kind kind = Kind::Arbitrage;
  PriceVector prices;
};

struct RoutedPool {
  TradingPtr set;
  AssetMapping mapping;
};

struct RoutingInstance {
  std::size_t n = 0;
  std::vector<RoutedPool> pools;
  UtilitySpec utility;

  /// Checks mappings, dimensions and prices.
  void validate() const;
};

struct RoutingSolution {
  std::vector<TradeVector> trades;  ///< local coordinates of each pool
  Vector net;                       ///< Psi = sum_i A_i Delta_i
  double primal = 0.0;              ///< c^T Psi
  double violation = 0.0;           ///< max_i (-Psi_i)_+ for Arbitrage, else 0
  double dual = 0.0;
  PriceVector nu;
  double gap = 0.0;                 ///< dual - primal
  bool converged = false;
};

/// +inf outside the domain of Ubar.
double dual_objective(const RoutingInstance& instance, std::span<const double> nu,
                      const Tolerance& tol = {});

/// Minimizes the dual over c <= nu <= 1e6 max(c) by log-coordinate descent.
/// `converged` is set when both the gap and the violation are <= gap_tol.
RoutingSolution route(const RoutingInstance& instance, const Tolerance& tol = {},
                      double gap_tol = 1e-6);

/// Recomputes the gap from the solution's trades and checks each pool's
/// restricted dual prices lie in its marginal-price cone at Delta_i.
bool verify_optimality(const RoutingInstance& instance, const RoutingSolution& solution,
                       double gap_tol = 1e-6, const Tolerance& tol = {});

}  // namespace cfmm
