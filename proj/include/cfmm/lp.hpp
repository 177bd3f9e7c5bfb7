#pragma once

// Liquidity provision: proportional reserve changes and pro-rata share weights.
//
// Adding nu R to the reserves credits the provider with nu/(1 + nu) of the
// pool; every other weight is diluted by 1/(1 + nu). Removal is the same map
// with nu -> -nu and needs nu <= w_j.

#include <map>
#include <span>
#include <string>
#include <utility>

#include "cfmm/reachable.hpp"

namespace cfmm {

struct ShareLedger {
  std::map<std::string, double> weights;

  static ShareLedger single(const std::string& provider);

  /// Throws InvalidParameter unless weights are >= 0 and sum to 1 within 1e-12.
  void validate() const;
  double weight(const std::string& provider) const;
  double total() const;
};

struct LiquidityEvent {
  enum class Direction { Add, Remove };
  std::string provider;
  double fraction = 0.0;
  Direction direction = Direction::Add;
};

struct LiquidityUpdate {
  ShareLedger ledger;
  ReserveVector reserves;
};

/// Reserves scale by (1 +- nu). Raises NonPositiveFraction for nu <= 0 and
/// RemoveExceedsShare when a removal exceeds the provider's weight. Removing
/// the whole pool (nu = w_j = 1) leaves an empty ledger and zero reserves.
LiquidityUpdate apply_liquidity(const ShareLedger& ledger, std::span<const double> reserves,
                                const LiquidityEvent& event);

/// True iff the numeraire-normalized marginal prices at `after` match those at
/// `before` within `tol` (relative).
bool prices_preserved(const ReachableSet& set, std::span<const double> before,
                      std::span<const double> after, double tol = 1e-8);

/// prices_preserved for the proportional change R -> (1 + nu) R.
bool price_invariance_check(const ReachableSet& set, std::span<const double> reserves, double nu,
                            double tol = 1e-8);

}  // namespace cfmm
