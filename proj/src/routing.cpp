#include "cfmm/routing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cfmm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

bool in_domain(const UtilitySpec& u, std::span<const double> nu) {
  for (std::size_t i = 0; i < nu.size(); ++i) {
    if (u.kind == UtilitySpec::Kind::Arbitrage ? nu[i] < u.prices[i] : nu[i] != u.prices[i]) {
      return false;
    }
  }
  return true;
}

struct Primal {
  std::vector<TradeVector> trades;
  Vector net;
  double utility = 0.0;
  double violation = 0.0;
};

Primal primal_from_trades(const RoutingInstance& inst, std::vector<TradeVector> trades) {
  Primal p;
  p.net.assign(inst.n, 0.0);
  for (std::size_t k = 0; k < inst.pools.size(); ++k) {
    const Vector global = inst.pools[k].mapping.embed(trades[k]);
    for (std::size_t i = 0; i < inst.n; ++i) p.net[i] += global[i];
  }
  p.trades = std::move(trades);
  p.utility = dot(inst.utility.prices, p.net);
  if (inst.utility.kind == UtilitySpec::Kind::Arbitrage) {
    for (double x : p.net) p.violation = std::max(p.violation, -x);
  }
  return p;
}

}  // namespace

void RoutingInstance::validate() const {
  if (n == 0) fail(ErrorCode::InvalidParameter, "RoutingInstance: no assets");
  if (pools.empty()) fail(ErrorCode::InvalidParameter, "RoutingInstance: no pools");
  for (const auto& p : pools) {
    if (!p.set) fail(ErrorCode::InvalidParameter, "RoutingInstance: null trading set");
    require_dim(n, p.mapping.global_dim, "RoutingInstance mapping");
    p.mapping.validate();
    require_dim(p.set->dim(), p.mapping.local_to_global.size(), "RoutingInstance pool");
  }
  require_dim(n, utility.prices.size(), "RoutingInstance utility");
  require_prices(utility.prices, "RoutingInstance utility");
}

double dual_objective(const RoutingInstance& instance, std::span<const double> nu,
                      const Tolerance& tol) {
  require_dim(instance.n, nu.size(), "dual_objective");
  if (!in_domain(instance.utility, nu)) return kInf;
  double total = 0.0;
  for (const auto& p : instance.pools) total += arb(*p.set, p.mapping.restrict(nu), tol).profit;
  return total;
}

RoutingSolution route(const RoutingInstance& instance, const Tolerance& tol, double gap_tol) {
  instance.validate();
  const PriceVector& c = instance.utility.prices;
  const double top = *std::max_element(c.begin(), c.end());

  Vector nu(c);
  if (instance.utility.kind == UtilitySpec::Kind::Arbitrage) {
    Vector lo(instance.n), hi(instance.n, 1e6 * top);
    for (std::size_t i = 0; i < instance.n; ++i) lo[i] = std::max(c[i], 1e-12 * top);
    auto objective = [&](std::span<const double> x) { return dual_objective(instance, x, tol); };
    nu = minimize_log_box(objective, lo, hi, lo, tol).argmin;
  }

  std::vector<TradeVector> trades;
  trades.reserve(instance.pools.size());
  double dual = 0.0;
  for (const auto& p : instance.pools) {
    ArbResult r = arb(*p.set, p.mapping.restrict(nu), tol);
    dual += r.profit;
    if (r.trade.empty()) r.trade.assign(p.set->dim(), 0.0);
    trades.push_back(std::move(r.trade));
  }
  Primal primal = primal_from_trades(instance, std::move(trades));

  RoutingSolution sol;
  sol.trades = std::move(primal.trades);
  sol.net = std::move(primal.net);
  sol.primal = primal.utility;
  sol.violation = primal.violation;
  sol.dual = dual;
  sol.nu = std::move(nu);
  sol.gap = dual - primal.utility;
  sol.converged = std::isfinite(dual) && std::abs(sol.gap) <= gap_tol && sol.violation <= gap_tol;
  return sol;
}

bool verify_optimality(const RoutingInstance& instance, const RoutingSolution& solution,
                       double gap_tol, const Tolerance& tol) {
  instance.validate();
  if (solution.trades.size() != instance.pools.size()) return false;
  require_dim(instance.n, solution.nu.size(), "verify_optimality");
  for (std::size_t k = 0; k < instance.pools.size(); ++k) {
    if (solution.trades[k].size() != instance.pools[k].set->dim()) return false;
    if (!instance.pools[k].set->feasible(solution.trades[k])) return false;
  }
  const Primal primal = primal_from_trades(instance, solution.trades);
  const double dual = dual_objective(instance, solution.nu, tol);
  if (!std::isfinite(dual)) return false;
  if (std::abs(dual - primal.utility) > gap_tol || primal.violation > gap_tol) return false;
  for (std::size_t k = 0; k < instance.pools.size(); ++k) {
    const auto& p = instance.pools[k];
    if (!marginal_price_cone_contains(*p.set, solution.trades[k], p.mapping.restrict(solution.nu),
                                      gap_tol, tol)) {
      return false;
    }
  }
  return true;
}

}  // namespace cfmm
