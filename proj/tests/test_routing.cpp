#include <doctest.h>

#include <cmath>

#include "cfmm/pools.hpp"
#include "cfmm/routing.hpp"

using namespace cfmm;

namespace {

RoutingInstance two_pools(UtilitySpec::Kind kind) {
  RoutingInstance inst;
  inst.n = 2;
  inst.pools.push_back({make_fee_pool(make_uniswap_v2(2.0), Vector{1.0, 2.0}, 1.0), AssetMapping::identity(2)});
  inst.pools.push_back({make_fee_pool(make_uniswap_v2(2.0), Vector{2.0, 1.0}, 1.0), AssetMapping::identity(2)});
  inst.utility = {kind, Vector{1.0, 1.0}};
  return inst;
}

}  // namespace

TEST_CASE("linear utility on two mirrored pools") {
  const RoutingInstance inst = two_pools(UtilitySpec::Kind::Linear);
  const RoutingSolution sol = route(inst);
  // At nu = c each pool trades to (sqrt2, sqrt2): profit 3 - 2 sqrt2 apiece.
  const double each = 3.0 - 2.0 * std::sqrt(2.0);
  CHECK(sol.converged);
  CHECK(sol.nu == Vector{1.0, 1.0});
  CHECK(sol.primal == doctest::Approx(2.0 * each).epsilon(1e-8));
  CHECK(sol.trades[0][0] == doctest::Approx(1.0 - std::sqrt(2.0)).epsilon(1e-5));
  CHECK(sol.trades[0][1] == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-5));
  CHECK(verify_optimality(inst, sol));
}

TEST_CASE("arbitrage utility keeps the network whole") {
  const RoutingInstance inst = two_pools(UtilitySpec::Kind::Arbitrage);
  const RoutingSolution sol = route(inst);
  CHECK(sol.converged);
  CHECK(std::abs(sol.gap) <= 1e-6);
  CHECK(sol.violation <= 1e-6);
  // Symmetric pools cancel, so the same profit is reachable with Psi >= 0.
  CHECK(sol.primal == doctest::Approx(6.0 - 4.0 * std::sqrt(2.0)).epsilon(1e-6));
  CHECK(verify_optimality(inst, sol));
}

TEST_CASE("dual objective domain") {
  const RoutingInstance arb_inst = two_pools(UtilitySpec::Kind::Arbitrage);
  CHECK(std::isinf(dual_objective(arb_inst, Vector{0.5, 1.0})));
  CHECK(std::isfinite(dual_objective(arb_inst, Vector{2.0, 1.0})));
  const RoutingInstance lin = two_pools(UtilitySpec::Kind::Linear);
  CHECK(std::isinf(dual_objective(lin, Vector{2.0, 1.0})));
}

TEST_CASE("a pool priced in line with the market is left alone") {
  RoutingInstance inst;
  inst.n = 3;
  inst.pools.push_back({make_fee_pool(make_uniswap_v2(1.0), Vector{1.0, 1.0}, 0.997), AssetMapping{{0, 2}, 3}});
  inst.utility = {UtilitySpec::Kind::Arbitrage, Vector{1.0, 5.0, 1.0}};
  const RoutingSolution sol = route(inst);
  CHECK(sol.converged);
  CHECK(std::abs(sol.primal) <= 1e-9);
  CHECK(verify_optimality(inst, sol));
}

TEST_CASE("instance validation and tampered solutions") {
  RoutingInstance bad = two_pools(UtilitySpec::Kind::Linear);
  bad.pools[0].mapping = AssetMapping{{0, 5}, 2};
  CHECK_THROWS_AS(route(bad), Error);
  bad = two_pools(UtilitySpec::Kind::Linear);
  bad.utility.prices = {1.0};
  CHECK_THROWS_AS(route(bad), Error);

  const RoutingInstance inst = two_pools(UtilitySpec::Kind::Linear);
  RoutingSolution sol = route(inst);
  sol.trades[0] = Vector{0.0, 0.0};
  CHECK_FALSE(verify_optimality(inst, sol));
}
