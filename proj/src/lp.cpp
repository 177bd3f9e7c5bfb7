#include "cfmm/lp.hpp"

#include <algorithm>
#include <cmath>

namespace cfmm {

ShareLedger ShareLedger::single(const std::string& provider) {
  ShareLedger l;
  l.weights[provider] = 1.0;
  return l;
}

double ShareLedger::total() const {
  double s = 0.0;
  for (const auto& [id, w] : weights) s += w;
  return s;
}

double ShareLedger::weight(const std::string& provider) const {
  auto it = weights.find(provider);
  return it == weights.end() ? 0.0 : it->second;
}

void ShareLedger::validate() const {
  if (weights.empty()) fail(ErrorCode::InvalidParameter, "ShareLedger: empty ledger");
  for (const auto& [id, w] : weights) {
    if (!(w >= 0.0)) fail(ErrorCode::InvalidParameter, "ShareLedger: negative weight for " + id);
  }
  if (std::abs(total() - 1.0) > 1e-12) fail(ErrorCode::InvalidParameter, "ShareLedger: weights must sum to 1");
}

LiquidityUpdate apply_liquidity(const ShareLedger& ledger, std::span<const double> reserves,
                                const LiquidityEvent& event) {
  ledger.validate();
  require_nonnegative(reserves, "apply_liquidity");
  const double nu = event.fraction;
  if (!(nu > 0.0) || !std::isfinite(nu)) {
    fail(ErrorCode::NonPositiveFraction, "apply_liquidity: fraction must be positive");
  }
  const bool add = event.direction == LiquidityEvent::Direction::Add;
  const double own = ledger.weight(event.provider);
  if (!add && nu > own) {
    fail(ErrorCode::RemoveExceedsShare, "apply_liquidity: removal exceeds the provider's share");
  }

  LiquidityUpdate out;
  out.reserves.assign(reserves.begin(), reserves.end());
  if (!add && nu == 1.0) {
    for (double& r : out.reserves) r = 0.0;
    return out;
  }
  const double s = add ? nu : -nu;
  for (double& r : out.reserves) r *= 1.0 + s;
  out.ledger = ledger;
  out.ledger.weights.try_emplace(event.provider, 0.0);
  for (auto& [id, w] : out.ledger.weights) {
    w = id == event.provider ? (w + s) / (1.0 + s) : w / (1.0 + s);
    if (w < 0.0) w = 0.0;
  }
  const double sum = out.ledger.total();
  if (std::abs(sum - 1.0) > 1e-13) {
    for (auto& [id, w] : out.ledger.weights) w /= sum;
  }
  return out;
}

bool prices_preserved(const ReachableSet& set, std::span<const double> before,
                      std::span<const double> after, double tol) {
  const PriceVector p0 = marginal_prices(set, before);
  const PriceVector p1 = marginal_prices(set, after);
  for (std::size_t i = 0; i < p0.size(); ++i) {
    if (std::abs(p1[i] - p0[i]) > tol * std::max(1.0, std::abs(p0[i]))) return false;
  }
  return true;
}

bool price_invariance_check(const ReachableSet& set, std::span<const double> reserves, double nu,
                            double tol) {
  if (!(nu > -1.0)) fail(ErrorCode::InvalidParameter, "price_invariance_check: need nu > -1");
  Vector after(reserves.begin(), reserves.end());
  for (double& r : after) r *= 1.0 + nu;
  return prices_preserved(set, reserves, after, tol);
}

}  // namespace cfmm
