#pragma once

// Single trades against a CFMM, with or without fees.
//
// A trade Delta is signed: positive entries are received by the trader,
// negative entries tendered. A trading set T holds the acceptable trades; it
// contains 0, is convex and downward closed.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cfmm/reachable.hpp"

namespace cfmm {

using TradeVector = Vector;

struct ArbResult {
  double profit = 0.0;
  TradeVector trade;
};

class TradingSet {
 public:
  virtual ~TradingSet() = default;

  std::size_t dim() const noexcept { return dim_; }

  /// Reserves the set was built at; empty for sets with no single reserve vector.
  const ReserveVector& reserves() const noexcept { return reserves_; }

  /// Membership; Delta must have dimension dim().
  bool feasible(std::span<const double> delta) const;

  /// Exact or structural arbitrage; the generic two-asset search is used otherwise.
  virtual std::optional<ArbResult> arb_closed(std::span<const double> /*prices*/,
                                              const Tolerance& /*tol*/) const {
    return std::nullopt;
  }

  virtual std::string describe() const = 0;

 protected:
  TradingSet(std::size_t dim, ReserveVector reserves);
  virtual bool feasible_impl(std::span<const double> delta) const = 0;

 private:
  std::size_t dim_;
  ReserveVector reserves_;
};

using TradingPtr = std::shared_ptr<const TradingSet>;

/// { Delta : R + gamma Delta^- - Delta^+ >= 0, psi(R + gamma Delta^- - Delta^+) >= psi(R) }.
class FeePoolTradingSet final : public TradingSet {
 public:
  /// Raises Unsupported if the pool has no psi, NotInSet if R is not reachable.
  FeePoolTradingSet(SetPtr pool, ReserveVector reserves, double gamma);

  double gamma() const noexcept { return gamma_; }
  const SetPtr& pool() const noexcept { return pool_; }
  std::string describe() const override;

 protected:
  bool feasible_impl(std::span<const double> delta) const override;

 private:
  SetPtr pool_;
  double gamma_;
  double psi_now_;
  double slack_;
};

TradingPtr make_fee_pool(SetPtr pool, ReserveVector reserves, double gamma);

/// T(R) = R - S, i.e. Delta is acceptable iff R - Delta is reachable.
TradingPtr trading_set_from_reachable(SetPtr set, ReserveVector reserves);

/// Minkowski sum of trading sets. arb adds up; membership uses
/// Delta in T  <=>  c^T Delta <= sum_i arb_i(c) for all prices c >= 0.
TradingPtr sum_trading_sets(std::vector<TradingPtr> sets, const Tolerance& tol = {});

bool trade_feasible(const TradingSet& set, std::span<const double> delta);

/// inf { l > 0 : Delta / l in T } by bisection: 0 when Delta <= 0, +inf when
/// no scale works. Boundary trades below 1e-7 of the reserve scale also give
/// +inf, since only the membership slack admits them.
double trade_phi(const TradingSet& set, std::span<const double> delta, const Tolerance& tol = {});

/// Closed form of trade_phi for a constant-product pool with fee gamma.
/// The level k does not enter; it is implied by R.
double v2_fee_phi_closed(std::span<const double> reserves, double k, double gamma,
                         std::span<const double> delta);

/// sup { c^T Delta : Delta in T }. A negative price gives +inf.
/// Generic search handles two-asset sets only (Unsupported otherwise).
ArbResult arb(const TradingSet& set, std::span<const double> prices, const Tolerance& tol = {});

/// Largest amount of asset `receive` obtainable for tendering `tender`
/// (a nonnegative vector of amounts given up). Returns +inf if unbounded.
double max_receivable(const TradingSet& set, std::size_t receive, std::span<const double> tender);

/// c in C(0): arb(c) <= band * (1 + |c^T R|).
bool in_no_trade_cone(const TradingSet& set, std::span<const double> prices, double band = 1e-10,
                      const Tolerance& tol = {});

/// c in C(Delta): |c^T Delta - arb(c)| <= band * (1 + |c^T Delta|). Delta must be feasible.
bool marginal_price_cone_contains(const TradingSet& set, std::span<const double> delta,
                                  std::span<const double> prices, double band = 1e-8,
                                  const Tolerance& tol = {});

struct BoundedLiquidity {
  double value = 0.0;  ///< supremum of the receivable amount (+inf if unbounded)
  bool attained = false;
};

/// sup { Delta_i : Delta in T }, probed by tendering every other asset at
/// growing caps. `attained` is false when the supremum is only a limit.
BoundedLiquidity bounded_liquidity(const TradingSet& set, std::size_t asset);

using TradingSetFactory = std::function<TradingPtr(const ReserveVector&)>;

/// [Delta2 in T(R - Delta1)] == [Delta1 + Delta2 in T(R)]. Pairs whose
/// aggregate lies within `band` of the boundary of T(R) count as agreeing.
/// Raises InfeasibleFirstTrade if Delta1 is not in T(R).
bool path_independence_check(const TradingSetFactory& make_set, std::span<const double> reserves,
                             std::span<const double> delta1, std::span<const double> delta2,
                             double band = 1e-9);

}  // namespace cfmm
