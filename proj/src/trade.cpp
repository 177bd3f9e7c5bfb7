#include "cfmm/trade.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cfmm/pools.hpp"

namespace cfmm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool all_nonpositive(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return x <= 0.0; });
}

constexpr double kTradeResolution = 1e-7;

double reserve_scale(const TradingSet& set) {
  double s = 1.0;
  for (double r : set.reserves()) s = std::max(s, r);
  return s;
}

class ReachableTradingSet final : public TradingSet {
 public:
  ReachableTradingSet(SetPtr set, ReserveVector reserves)
      : TradingSet(set->dim(), std::move(reserves)), set_(std::move(set)) {}

  std::string describe() const override { return "reserves_minus(" + set_->describe() + ")"; }

 protected:
  bool feasible_impl(std::span<const double> delta) const override {
    Vector after(reserves());
    for (std::size_t i = 0; i < after.size(); ++i) after[i] -= delta[i];
    return set_->contains(after);
  }

 private:
  SetPtr set_;
};

class SumTradingSet final : public TradingSet {
 public:
  SumTradingSet(std::vector<TradingPtr> sets, ReserveVector reserves, const Tolerance& tol)
      : TradingSet(sets.front()->dim(), std::move(reserves)), sets_(std::move(sets)), tol_(tol) {}

  std::optional<ArbResult> arb_closed(std::span<const double> c,
                                      const Tolerance& tol) const override {
    ArbResult total{0.0, Vector(dim(), 0.0)};
    for (const auto& s : sets_) {
      ArbResult part = arb(*s, c, tol);
      total.profit += part.profit;
      if (part.trade.empty()) {
        total.trade.clear();
        continue;
      }
      if (!total.trade.empty()) {
        for (std::size_t i = 0; i < dim(); ++i) total.trade[i] += part.trade[i];
      }
    }
    return total;
  }

  std::string describe() const override {
    std::string out = "trade_sum(";
    for (std::size_t i = 0; i < sets_.size(); ++i) {
      if (i) out += ", ";
      out += sets_[i]->describe();
    }
    return out + ")";
  }

 protected:
  bool feasible_impl(std::span<const double> delta) const override {
    if (all_nonpositive(delta)) return true;
    double size = 1.0;
    for (double d : delta) size = std::max(size, std::abs(d));
    auto gap = [&](std::span<const double> c) {
      double support = 0.0;
      for (const auto& s : sets_) support += arb(*s, c, tol_).profit;
      return support - dot(c, delta);
    };
    return minimize_on_simplex(gap, dim(), tol_).min >= -1e-9 * size;
  }

 private:
  std::vector<TradingPtr> sets_;
  Tolerance tol_;
};

// Best trade receiving asset `recv` for tendering asset `tend`, a concave
// problem in the tendered amount x.
ArbResult one_direction(const TradingSet& set, std::span<const double> c, std::size_t recv,
                        std::size_t tend, const Tolerance& tol) {
  const std::size_t n = set.dim();
  Vector tender(n, 0.0);
  auto received = [&](double x) {
    tender[tend] = x;
    return max_receivable(set, recv, tender);
  };
  auto profit = [&](double x) { return c[recv] * received(x) - c[tend] * x; };

  const double scale = reserve_scale(set);
  double x_best;
  if (c[tend] == 0.0) {
    x_best = 1e12 * scale;
  } else {
    double x = scale;
    double fx = profit(x);
    while (x < 1e15 * scale) {
      const double f2 = profit(2.0 * x);
      if (!(f2 > fx)) break;
      x *= 2.0;
      fx = f2;
    }
    auto neg = [&](double t) { return -profit(t); };
    x_best = minimize_scalar_convex(neg, {0.0, 2.0 * x}, tol).argmin;
  }
  const double y = received(x_best);
  ArbResult out;
  out.trade.assign(n, 0.0);
  out.trade[recv] = y;
  out.trade[tend] = -x_best;
  if (std::isinf(y)) {
    out.profit = c[recv] > 0.0 ? kInf : -c[tend] * x_best;
    return out;
  }
  out.profit = c[recv] * y - c[tend] * x_best;
  // Feasibility is decided on post-trade reserves, so gains below rounding at
  // reserve scale are not trades.
  const Vector& r = set.reserves();
  const double size = c[recv] * std::max(y, r.empty() ? 0.0 : r[recv]) +
                      c[tend] * std::max(x_best, r.empty() ? 0.0 : r[tend]);
  if (out.profit <= 64.0 * kEps * size) {
    out.profit = 0.0;
    out.trade.assign(n, 0.0);
  }
  return out;
}

}  // namespace

// -------------------------------------------------------------- TradingSet

TradingSet::TradingSet(std::size_t dim, ReserveVector reserves)
    : dim_(dim), reserves_(std::move(reserves)) {
  if (dim_ == 0) fail(ErrorCode::InvalidParameter, "TradingSet: dimension must be >= 1");
}

bool TradingSet::feasible(std::span<const double> delta) const {
  require_dim(dim_, delta.size(), "trade_feasible");
  for (double d : delta) {
    if (!std::isfinite(d)) return false;
  }
  return feasible_impl(delta);
}

FeePoolTradingSet::FeePoolTradingSet(SetPtr pool, ReserveVector reserves, double gamma)
    : TradingSet(pool ? pool->dim() : 1, std::move(reserves)), pool_(std::move(pool)), gamma_(gamma) {
  if (!pool_) fail(ErrorCode::InvalidParameter, "FeePoolTradingSet: null pool");
  require_dim(pool_->dim(), this->reserves().size(), "FeePoolTradingSet");
  if (!(gamma_ >= 0.0 && gamma_ <= 1.0)) {
    fail(ErrorCode::InvalidParameter, "FeePoolTradingSet: gamma must lie in [0, 1]");
  }
  if (!pool_->contains(this->reserves())) {
    fail(ErrorCode::NotInSet, "FeePoolTradingSet: reserves are not in the pool's reachable set");
  }
  const auto psi = pool_->psi(this->reserves());
  if (!psi) fail(ErrorCode::Unsupported, "FeePoolTradingSet: pool has no psi representation");
  psi_now_ = *psi;
  // Rounding allowance so that psi evaluated at R itself always passes.
  slack_ = 4.0 * kEps * std::max(1.0, std::abs(psi_now_));
}

std::string FeePoolTradingSet::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << "fee_pool(" << pool_->describe() << ", gamma=" << gamma_ << ")";
  return os.str();
}

bool FeePoolTradingSet::feasible_impl(std::span<const double> delta) const {
  Vector eff(reserves());
  for (std::size_t i = 0; i < eff.size(); ++i) {
    const double d = delta[i];
    eff[i] += d < 0.0 ? gamma_ * -d : -d;
    if (eff[i] < 0.0) return false;
  }
  return *pool_->psi(eff) >= psi_now_ - slack_;
}

TradingPtr make_fee_pool(SetPtr pool, ReserveVector reserves, double gamma) {
  return std::make_shared<FeePoolTradingSet>(std::move(pool), std::move(reserves), gamma);
}

TradingPtr trading_set_from_reachable(SetPtr set, ReserveVector reserves) {
  if (!set) fail(ErrorCode::InvalidParameter, "trading_set_from_reachable: null set");
  require_dim(set->dim(), reserves.size(), "trading_set_from_reachable");
  if (!set->contains(reserves)) {
    fail(ErrorCode::NotInSet, "trading_set_from_reachable: reserves are not reachable");
  }
  return std::make_shared<ReachableTradingSet>(std::move(set), std::move(reserves));
}

TradingPtr sum_trading_sets(std::vector<TradingPtr> sets, const Tolerance& tol) {
  if (sets.empty()) fail(ErrorCode::InvalidParameter, "sum_trading_sets: no sets given");
  tol.validate();
  ReserveVector total(sets.front()->dim(), 0.0);
  for (const auto& s : sets) {
    if (!s) fail(ErrorCode::InvalidParameter, "sum_trading_sets: null set");
    require_dim(sets.front()->dim(), s->dim(), "sum_trading_sets");
    if (s->reserves().empty()) {
      total.clear();
    } else if (!total.empty()) {
      for (std::size_t i = 0; i < total.size(); ++i) total[i] += s->reserves()[i];
    }
  }
  return std::make_shared<SumTradingSet>(std::move(sets), std::move(total), tol);
}

bool trade_feasible(const TradingSet& set, std::span<const double> delta) {
  return set.feasible(delta);
}

double trade_phi(const TradingSet& set, std::span<const double> delta, const Tolerance& tol) {
  require_dim(set.dim(), delta.size(), "trade_phi");
  if (all_nonpositive(delta)) return 0.0;
  Vector scaled(delta.size());
  auto ok = [&](double lambda) {
    for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = delta[i] / lambda;
    return set.feasible(scaled);
  };
  Bracket b;
  try {
    b = expand_bracket(ok, 1.0, TrueSide::Above);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoBracketFound) throw;
    return ok(1.0) ? 0.0 : kInf;
  }
  const double lambda = bisect_boundary(ok, b, tol);
  // A boundary trade this small relative to the reserves is accepted only by
  // the membership slack, so the direction has no feasible scale.
  double size = 0.0;
  for (double d : delta) size = std::max(size, std::abs(d));
  if (size / lambda < kTradeResolution * reserve_scale(set)) return kInf;
  return lambda;
}

double v2_fee_phi_closed(std::span<const double> reserves, double k, double gamma,
                         std::span<const double> delta) {
  require_dim(2, reserves.size(), "v2_fee_phi_closed");
  require_dim(2, delta.size(), "v2_fee_phi_closed");
  if (!(k > 0.0)) fail(ErrorCode::InvalidParameter, "v2_fee_phi_closed: k must be > 0");
  // a_i is the change in effective reserves: gamma Delta^- - Delta^+.
  double a[2];
  for (int i = 0; i < 2; ++i) a[i] = delta[i] < 0.0 ? gamma * -delta[i] : -delta[i];
  if (a[0] >= 0.0 && a[1] >= 0.0) return 0.0;
  const double r1 = reserves[0];
  const double r2 = reserves[1];
  const double den = r1 * a[1] + r2 * a[0];
  if (!(den > 0.0)) return kInf;
  double out = -a[0] * a[1] / den;
  for (int i = 0; i < 2; ++i) {
    if (a[i] < 0.0) out = std::max(out, -a[i] / reserves[i]);
  }
  return out;
}

double max_receivable(const TradingSet& set, std::size_t receive, std::span<const double> tender) {
  require_dim(set.dim(), tender.size(), "max_receivable");
  if (receive >= set.dim()) fail(ErrorCode::IndexOutOfRange, "max_receivable: asset index out of range");
  Vector delta(tender.size());
  for (std::size_t i = 0; i < tender.size(); ++i) {
    if (!(tender[i] >= 0.0)) fail(ErrorCode::InvalidParameter, "max_receivable: tendered amounts must be >= 0");
    delta[i] = -tender[i];
  }
  delta[receive] = 0.0;
  auto ok = [&](double y) {
    delta[receive] = y;
    return set.feasible(delta);
  };
  const double seed = set.reserves().empty() ? 1.0 : std::max(set.reserves()[receive], 1.0);
  Bracket b;
  try {
    b = expand_bracket(ok, seed, TrueSide::Below);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoBracketFound) throw;
    return ok(seed) ? kInf : 0.0;
  }
  return bisect_boundary(ok, b, Tolerance::tight());
}

ArbResult arb(const TradingSet& set, std::span<const double> prices, const Tolerance& tol) {
  require_dim(set.dim(), prices.size(), "arb");
  for (double c : prices) {
    if (std::isnan(c)) fail(ErrorCode::InvalidParameter, "arb: NaN price");
    if (c < 0.0) return ArbResult{kInf, {}};
  }
  if (auto closed = set.arb_closed(prices, tol)) return *closed;
  if (set.dim() != 2) fail(ErrorCode::Unsupported, "arb: generic search supports two-asset sets only");

  ArbResult best{0.0, Vector(2, 0.0)};
  for (std::size_t recv = 0; recv < 2; ++recv) {
    if (prices[recv] == 0.0) continue;
    ArbResult cand = one_direction(set, prices, recv, 1 - recv, tol);
    if (cand.profit > best.profit) best = std::move(cand);
  }
  return best;
}

bool in_no_trade_cone(const TradingSet& set, std::span<const double> prices, double band,
                      const Tolerance& tol) {
  const double value = set.reserves().empty() ? 0.0 : dot(prices, set.reserves());
  return arb(set, prices, tol).profit <= band * (1.0 + std::abs(value));
}

bool marginal_price_cone_contains(const TradingSet& set, std::span<const double> delta,
                                  std::span<const double> prices, double band,
                                  const Tolerance& tol) {
  require_dim(set.dim(), delta.size(), "marginal_price_cone_contains");
  if (!set.feasible(delta)) {
    fail(ErrorCode::InvalidParameter, "marginal_price_cone_contains: trade is not feasible");
  }
  const double here = dot(prices, delta);
  return std::abs(here - arb(set, prices, tol).profit) <= band * (1.0 + std::abs(here));
}

BoundedLiquidity bounded_liquidity(const TradingSet& set, std::size_t asset) {
  if (asset >= set.dim()) fail(ErrorCode::IndexOutOfRange, "bounded_liquidity: asset index out of range");
  const double scale = reserve_scale(set);
  auto at_cap = [&](double cap) {
    Vector tender(set.dim(), cap);
    tender[asset] = 0.0;
    return max_receivable(set, asset, tender);
  };
  const double far = at_cap(1e12 * scale);
  if (std::isinf(far)) return {kInf, false};
  const double near = at_cap(1e6 * scale);
  return {far, far - near <= 1e-12 * std::max(1.0, far)};
}

bool path_independence_check(const TradingSetFactory& make_set, std::span<const double> reserves,
                             std::span<const double> delta1, std::span<const double> delta2,
                             double band) {
  const ReserveVector r(reserves.begin(), reserves.end());
  const TradingPtr first = make_set(r);
  require_dim(first->dim(), delta1.size(), "path_independence_check");
  require_dim(first->dim(), delta2.size(), "path_independence_check");
  if (!first->feasible(delta1)) {
    fail(ErrorCode::InfeasibleFirstTrade, "path_independence_check: first trade is not feasible");
  }
  ReserveVector after(r);
  Vector both(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    after[i] -= delta1[i];
    both[i] = delta1[i] + delta2[i];
  }
  const TradingPtr second = make_set(after);
  const bool sequential = second->feasible(delta2);
  const bool aggregate = first->feasible(both);
  if (sequential == aggregate) return true;
  return std::abs(trade_phi(*first, both) - 1.0) <= band ||
         std::abs(trade_phi(*second, delta2) - 1.0) <= band;
}

}  // namespace cfmm
