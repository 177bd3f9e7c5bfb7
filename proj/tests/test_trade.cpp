#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "cfmm/pools.hpp"
#include "cfmm/trade.hpp"

using namespace cfmm;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

TradingPtr v2_pool(double r1, double r2, double gamma) {
  return make_fee_pool(make_uniswap_v2(r1 * r2), Vector{r1, r2}, gamma);
}

// Best profit from tendering asset `in` for asset `out` on a fee v2 pool.
// Output y(x) = gamma x R_out / (R_in + gamma x); first-order condition
// R_in + gamma x = sqrt(gamma c_out R_out R_in / c_in).
double v2_one_way(const Vector& R, const Vector& c, double gamma, int out, int in) {
  const double s = std::sqrt(gamma * c[out] * R[out] * R[in] / c[in]);
  const double x = (s - R[in]) / gamma;
  if (x <= 0.0) return 0.0;
  const double y = gamma * x * R[out] / (R[in] + gamma * x);
  return c[out] * y - c[in] * x;
}

double v2_arb_oracle(const Vector& R, const Vector& c, double gamma) {
  return std::max(v2_one_way(R, c, gamma, 0, 1), v2_one_way(R, c, gamma, 1, 0));
}

}  // namespace

TEST_CASE("feasibility examples") {
  const auto t = v2_pool(1.0, 1.0, 1.0);
  CHECK(trade_feasible(*t, Vector{0.5, -1.0}));
  CHECK(trade_feasible(*t, Vector{0.0, 0.0}));
  CHECK_FALSE(trade_feasible(*t, Vector{0.6, -1.0}));
  CHECK_FALSE(trade_feasible(*t, Vector{1.0, -1e9}));
  CHECK(trade_feasible(*t, Vector{-1.0, -1.0}));
  CHECK_THROWS_AS(trade_feasible(*t, Vector{0.1, 0.1, 0.1}), Error);

  const auto fee = v2_pool(1.0, 1.0, 0.9);
  CHECK_FALSE(trade_feasible(*fee, Vector{0.5, -1.0}));
  // gamma = 0.9: 1 tendered counts as 0.9, so 0.9/1.9 is the most out.
  CHECK(trade_feasible(*fee, Vector{0.9 / 1.9 * (1.0 - 1e-9), -1.0}));
}

TEST_CASE("fee pool construction errors") {
  const auto v2 = make_uniswap_v2(1.0);
  CHECK_THROWS_AS(make_fee_pool(v2, Vector{0.5, 0.5}, 1.0), Error);
  CHECK_THROWS_AS(make_fee_pool(v2, Vector{1.0, 1.0}, 1.5), Error);
  CHECK_THROWS_AS(make_fee_pool(v2, Vector{1.0, 1.0}, -0.1), Error);
}

TEST_CASE("trade phi") {
  const auto t = v2_pool(1.0, 1.0, 1.0);
  CHECK(trade_phi(*t, Vector{0.5, -1.0}) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(trade_phi(*t, Vector{0.0, 0.0}) == 0.0);
  CHECK(trade_phi(*t, Vector{2.0, -1.0}) == kInf);
  CHECK(v2_fee_phi_closed(Vector{1.0, 1.0}, 1.0, 1.0, Vector{0.5, -1.0}) == doctest::Approx(1.0));
  CHECK(v2_fee_phi_closed(Vector{1.0, 1.0}, 1.0, 1.0, Vector{1e-12, -1.0}) < 1e-6);

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.2, 5.0), f(0.01, 0.99);
  for (double gamma : {1.0, 0.99, 0.9}) {
    for (int i = 0; i < 100; ++i) {
      const Vector R{u(rng), u(rng)};
      const auto ts = v2_pool(R[0], R[1], gamma);
      // Random trade that tenders asset 1 and takes a fraction of the max out.
      const double x = u(rng);
      const double ymax = gamma * x * R[0] / (R[1] + gamma * x);
      const Vector d{f(rng) * ymax, -x};
      const double closed = v2_fee_phi_closed(R, R[0] * R[1], gamma, d);
      CHECK(closed < 1.0);
      CHECK(std::abs(trade_phi(*ts, d) - closed) <= 1e-8 * closed);
    }
  }
}

TEST_CASE("arbitrage examples") {
  const auto t = v2_pool(1.0, 1.0, 1.0);
  ArbResult a = arb(*t, Vector{4.0, 1.0});
  CHECK(a.profit == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(a.trade[0] == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(a.trade[1] == doctest::Approx(-1.0).epsilon(1e-6));
  a = arb(*t, Vector{1.0, 1.0});
  CHECK(a.profit == 0.0);
  const auto fee = v2_pool(1.0, 1.0, 0.9);
  CHECK(arb(*fee, Vector{1.0, 1.0}).profit == 0.0);
  CHECK(arb(*t, Vector{-1.0, 1.0}).profit == kInf);
}

TEST_CASE("arbitrage agrees with the closed-form fee oracle") {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(0.2, 5.0);
  for (double gamma : {1.0, 0.997, 0.9}) {
    for (int i = 0; i < 60; ++i) {
      const Vector R{u(rng), u(rng)};
      const Vector c{u(rng), u(rng)};
      const auto ts = v2_pool(R[0], R[1], gamma);
      const ArbResult a = arb(*ts, c);
      const double want = v2_arb_oracle(R, c, gamma);
      CHECK(std::abs(a.profit - want) <= 1e-8 * (1.0 + c[0] * R[0] + c[1] * R[1]));
      CHECK(trade_feasible(*ts, a.trade));
    }
  }
}

TEST_CASE("no-trade cone") {
  const auto fee = v2_pool(1.0, 1.0, 0.9);
  CHECK(in_no_trade_cone(*fee, Vector{1.0, 1.0}));
  CHECK_FALSE(in_no_trade_cone(*fee, Vector{2.0, 1.0}));
  CHECK(in_no_trade_cone(*fee, Vector{1.05, 1.0}));
  CHECK(in_no_trade_cone(*fee, Vector{0.95, 1.0}));
  CHECK_FALSE(in_no_trade_cone(*fee, Vector{0.8, 1.0}));
  const auto t = v2_pool(1.0, 1.0, 1.0);
  CHECK_FALSE(in_no_trade_cone(*t, Vector{1.01, 1.0}));
}

TEST_CASE("marginal price cones") {
  const auto t = v2_pool(1.0, 1.0, 1.0);
  CHECK(marginal_price_cone_contains(*t, Vector{0.5, -1.0}, Vector{4.0, 1.0}));
  CHECK(marginal_price_cone_contains(*t, Vector{0.0, 0.0}, Vector{1.0, 1.0}));
  CHECK_FALSE(marginal_price_cone_contains(*t, Vector{0.0, 0.0}, Vector{4.0, 1.0}));
  CHECK_THROWS_AS(marginal_price_cone_contains(*t, Vector{2.0, -1.0}, Vector{1.0, 1.0}), Error);
}

TEST_CASE("bounded liquidity") {
  const auto t = v2_pool(1.0, 1.0, 1.0);
  BoundedLiquidity b = bounded_liquidity(*t, 0);
  CHECK(b.value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_FALSE(b.attained);

  const auto v3 = make_fee_pool(make_uniswap_v3_tick(1.0, 1.0, 4.0), Vector{1.0, 1.0}, 1.0);
  b = bounded_liquidity(*v3, 0);
  CHECK(b.attained);
  CHECK(b.value == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(max_receivable(*v3, 0, Vector{0.0, 3.0}) == doctest::Approx(1.0).epsilon(1e-8));

  const auto empty = make_fee_pool(make_uniswap_v3_tick(1.0, 1.0, 6.0), Vector{0.0, 5.0}, 1.0);
  CHECK(bounded_liquidity(*empty, 0).value == 0.0);
}

TEST_CASE("fee-free trading set from a reachable set") {
  const auto v2 = make_uniswap_v2(1.0);
  const auto t = trading_set_from_reachable(v2, Vector{1.0, 1.0});
  const auto f = v2_pool(1.0, 1.0, 1.0);
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 300; ++i) {
    const Vector d{u(rng), u(rng)};
    const double p = v2_fee_phi_closed(Vector{1.0, 1.0}, 1.0, 1.0, d);
    if (std::abs(p - 1.0) < 1e-9) continue;
    CHECK(t->feasible(d) == f->feasible(d));
  }
  // gamma = 1 arb equals c^T R - V(c).
  for (int i = 0; i < 30; ++i) {
    const Vector c{std::abs(u(rng)) + 0.1, std::abs(u(rng)) + 0.1};
    const double want = c[0] + c[1] - 2.0 * std::sqrt(c[0] * c[1]);
    CHECK(std::abs(arb(*t, c).profit - want) <= 1e-8);
  }
}

TEST_CASE("sum of trading sets") {
  const auto a = v2_pool(1.0, 2.0, 1.0);
  const auto b = v2_pool(2.0, 1.0, 1.0);
  const auto s = sum_trading_sets({a, b});
  const Vector c{1.0, 3.0};
  CHECK(arb(*s, c).profit == doctest::Approx(arb(*a, c).profit + arb(*b, c).profit).epsilon(1e-12));
  const Vector d1{0.3, -1.0}, d2{-0.4, 0.15};
  REQUIRE(a->feasible(d1));
  REQUIRE(b->feasible(d2));
  CHECK(s->feasible(Vector{d1[0] + d2[0], d1[1] + d2[1]}));
  CHECK_FALSE(s->feasible(Vector{5.0, 0.0}));
}

TEST_CASE("path independence") {
  auto fee_free = [](const ReserveVector& R) {
    return trading_set_from_reachable(make_uniswap_v2(1.0), R);
  };
  const Vector R{1.0, 1.0};
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> x(0.01, 0.5), f(0.05, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double x1 = x(rng);
    const Vector d1{f(rng) * x1 / (1.0 + x1), -x1};
    const Vector d2{-x(rng), f(rng) * 0.1};
    CHECK(path_independence_check(fee_free, R, d1, d2));
  }
  CHECK(path_independence_check(fee_free, R, Vector{0.3, -0.5}, Vector{0.0, 0.0}));
  CHECK_THROWS_AS(path_independence_check(fee_free, R, Vector{2.0, -1.0}, Vector{0.0, 0.0}), Error);

  auto with_fee = [](const ReserveVector& R) {
    return make_fee_pool(make_uniswap_v2(R[0] * R[1]), R, 0.97);
  };
  // Two half trades pay the fee on each leg's own curve.
  bool found = false;
  for (int i = 0; i < 2000 && !found; ++i) {
    const double x1 = x(rng);
    const Vector d1{0.97 * x1 / (1.0 + 0.97 * x1) * (1.0 - 1e-12), -x1};
    const Vector d2{-x(rng), f(rng) * 0.3};
    try {
      found = !path_independence_check(with_fee, R, d1, d2);
    } catch (const Error&) {
    }
  }
  CHECK(found);
}
