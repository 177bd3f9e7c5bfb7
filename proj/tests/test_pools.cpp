#include <doctest.h>

#include <cmath>
#include <random>

#include "cfmm/pools.hpp"

using namespace cfmm;

namespace {

double rel_err(double got, double want) { return std::abs(got - want) / std::max(std::abs(want), 1e-300); }

std::mt19937_64& rng() {
  static std::mt19937_64 r(12345);
  return r;
}

Vector random_reserves(std::size_t n = 2, double lo = 0.1, double hi = 10.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(n);
  for (double& x : v) x = u(rng());
  return v;
}

// Independent check of the canonical value: psi(R / phi) should sit on the level.
double psi_at_boundary(const ReachableSet& s, const Vector& r, double p) {
  Vector b(r);
  for (double& x : b) x /= p;
  return *s.psi(b);
}

}  // namespace

TEST_CASE("membership examples") {
  const auto v2 = make_uniswap_v2(1.0);
  CHECK(v2->contains(Vector{1.0, 1.0}));
  CHECK_FALSE(v2->contains(Vector{0.5, 0.5}));
  CHECK_FALSE(v2->contains(Vector{-1.0, -5.0}));
  CHECK(make_uniswap_v3_tick(1.0, 1.0, 4.0)->contains(Vector{1.0, 1.0}));
  CHECK_THROWS_AS(v2->contains(Vector{1.0}), Error);
}

TEST_CASE("phi examples") {
  const auto v2 = make_uniswap_v2(1.0);
  CHECK(phi(*v2, Vector{1.0, 4.0}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(phi(*v2, Vector{0.0, 1.0}) == 0.0);
  CHECK(phi_bisection(*v2, Vector{0.0, 1.0}) == 0.0);
  const auto lmsr = make_lmsr(1.0, 2);
  CHECK(std::abs(phi(*lmsr, Vector{std::log(2.0), std::log(2.0)}) - 1.0) <= 1e-9);
  // exp(0) alone already fills the budget, so only the 1e-12 membership slack
  // admits scaled copies of R = (0, 5): phi is 5 / log(1e12) rather than 0.
  CHECK(phi(*lmsr, Vector{0.0, 5.0}) <= 5.0 / std::log(1e12) * (1.0 + 1e-6));
}

TEST_CASE("pool closed forms at their reference points") {
  CHECK(pool_phi_closed(*make_uniswap_v2(4.0), Vector{4.0, 4.0}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(pool_phi_closed(*make_uniswap_v3_tick(1.0, 1.0, 4.0), Vector{1.0, 1.0}) ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(pool_phi_closed(*make_curve(1.0, 1.0), Vector{1.0, 1.0}) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("closed-form phi agrees with bisection") {
  const std::vector<SetPtr> pools{make_uniswap_v2(1.0), make_uniswap_v2(3.7),
                                  make_uniswap_v3_tick(1.0, 1.0, 4.0), make_uniswap_v3_tick(0.5, 2.0, 3.0),
                                  make_curve(1.0, 3.0), make_curve(0.3, 1.0)};
  for (const auto& p : pools) {
    double worst = 0.0;
    for (int i = 0; i < 300; ++i) {
      const Vector r = random_reserves();
      worst = std::max(worst, rel_err(phi_bisection(*p, r), *p->phi_closed(r)));
    }
    INFO(p->describe());
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("closed forms land on the level set") {
  for (const SetPtr& p : {SetPtr(make_uniswap_v2(2.0)), SetPtr(make_uniswap_v3_tick(1.0, 0.5, 2.0)),
                          SetPtr(make_curve(0.7, 2.0))}) {
    for (int i = 0; i < 100; ++i) {
      const Vector r = random_reserves();
      CHECK(rel_err(psi_at_boundary(*p, r, *p->phi_closed(r)), p->psi_level()) <= 1e-10);
    }
  }
}

TEST_CASE("curve cubic radical matches the polished root") {
  for (int i = 0; i < 200; ++i) {
    const Vector r = random_reserves();
    const auto root = curve_cubic_radical(1.0, 3.0, r[0], r[1]);
    if (!root) continue;
    const double P = r[0] * r[1], S = r[0] + r[1];
    const double resid = -1.0 * *root * *root * *root - 3.0 * P * *root + P * S;
    CHECK(std::abs(resid) <= 1e-8 * std::max(1.0, P * S));
    CHECK(rel_err(*root, *make_curve(1.0, 3.0)->phi_closed(r)) <= 1e-10);
  }
}

TEST_CASE("v3 closed form is the canonical function of (R1+a)(R2+b) >= k") {
  const auto v3 = make_uniswap_v3_tick(1.0, 2.0, 5.0);
  for (int i = 0; i < 500; ++i) {
    const Vector r = random_reserves(2, 0.0, 4.0);
    const double p = pool_phi_closed(*v3, r);
    const double lhs = (r[0] + 1.0) * (r[1] + 2.0);
    if (std::abs(lhs - 5.0) < 1e-9) continue;
    CHECK((p >= 1.0) == (lhs >= 5.0));
  }
}

TEST_CASE("curve homogeneity") {
  const auto c = make_curve(1.0, 3.0);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (int i = 0; i < 300; ++i) {
    const Vector r = random_reserves();
    const double t = u(rng());
    const Vector tr{t * r[0], t * r[1]};
    CHECK(rel_err(pool_phi_closed(*c, tr), t * pool_phi_closed(*c, r)) <= 1e-7);
  }
}

TEST_CASE("gradient examples and finite-difference agreement") {
  const auto g1 = pool_grad_phi(*make_uniswap_v2(1.0), Vector{1.0, 1.0});
  CHECK(g1[0] == doctest::Approx(0.5));
  CHECK(g1[1] == doctest::Approx(0.5));
  const auto g2 = pool_grad_phi(*make_uniswap_v2(1.0), Vector{1.0, 4.0});
  CHECK(g2[0] == doctest::Approx(1.0));
  CHECK(g2[1] == doctest::Approx(0.25));
  const auto g3 = pool_grad_phi(*make_uniswap_v2(4.0), Vector{2.0, 2.0});
  CHECK(g3[0] == doctest::Approx(0.25));
  CHECK(g3[1] == doctest::Approx(0.25));
  CHECK_THROWS_AS(pool_grad_phi(*make_lmsr(1.0, 2), Vector{1.0, 1.0}), Error);

  for (const SetPtr& p : {SetPtr(make_uniswap_v2(2.0)), SetPtr(make_uniswap_v3_tick(1.0, 0.5, 2.0)),
                          SetPtr(make_curve(0.7, 2.0))}) {
    for (int i = 0; i < 100; ++i) {
      const Vector r = random_reserves(2, 0.5, 10.0);
      const Vector g = pool_grad_phi(*p, r);
      for (std::size_t j = 0; j < 2; ++j) {
        const double h = 1e-5 * r[j];
        Vector up(r), dn(r);
        up[j] += h;
        dn[j] -= h;
        const double fd = (pool_phi_closed(*p, up) - pool_phi_closed(*p, dn)) / (2.0 * h);
        CHECK(rel_err(g[j], fd) <= 1e-6);
      }
    }
  }
}

TEST_CASE("marginal prices use the last asset as numeraire") {
  const auto v2 = make_uniswap_v2(1.0);
  auto p = marginal_prices(*v2, Vector{1.0, 1.0});
  CHECK(p[0] == doctest::Approx(1.0));
  CHECK(p[1] == 1.0);
  p = marginal_prices(*v2, Vector{1.0, 4.0});
  CHECK(p[0] == doctest::Approx(4.0));
  p = marginal_prices(*v2, Vector{4.0, 1.0});
  CHECK(p[0] == doctest::Approx(0.25));

  // No closed gradient: finite differences against the analytic LMSR gradient,
  // which is proportional to exp(-R_i / (b phi)) R-weighted through phi.
  const auto lmsr = make_lmsr(1.0, 2);
  const Vector r{1.0, 2.0};
  const double ph = phi(*lmsr, r, Tolerance::tight());
  const double e1 = std::exp(-r[0] / ph), e2 = std::exp(-r[1] / ph);
  const auto q = marginal_prices(*lmsr, r);
  CHECK(rel_err(q[0], e1 / e2) <= 1e-6);
}

TEST_CASE("price direction is invariant under scaling") {
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (const SetPtr& p : {SetPtr(make_uniswap_v2(2.0)), SetPtr(make_uniswap_v3_tick(1.0, 0.5, 2.0)),
                          SetPtr(make_curve(0.7, 2.0)), SetPtr(make_lmsr(1.0, 2))}) {
    for (int i = 0; i < 30; ++i) {
      const Vector r = random_reserves(2, 0.5, 5.0);
      const double a = u(rng());
      const auto p0 = marginal_prices(*p, r);
      const auto p1 = marginal_prices(*p, Vector{a * r[0], a * r[1]});
      CHECK(rel_err(p1[0], p0[0]) <= 1e-6);
    }
  }
}

TEST_CASE("scale_to_boundary") {
  const auto v2 = make_uniswap_v2(1.0);
  auto b = scale_to_boundary(*v2, Vector{2.0, 2.0});
  CHECK(b[0] == doctest::Approx(1.0));
  CHECK(b[1] == doctest::Approx(1.0));
  b = scale_to_boundary(*v2, Vector{1.0, 4.0});
  CHECK(b[0] == doctest::Approx(0.5));
  CHECK(b[1] == doctest::Approx(2.0));
  try {
    scale_to_boundary(*v2, Vector{0.0, 1.0});
    FAIL("expected ZeroLiquidity");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroLiquidity);
  }
}

TEST_CASE("portfolio value examples") {
  const auto v2 = make_uniswap_v2(1.0);
  auto pv = portfolio_value(*v2, Vector{1.0, 1.0});
  CHECK(pv.value == doctest::Approx(2.0));
  CHECK(pv.minimizer[0] == doctest::Approx(1.0));
  pv = portfolio_value(*v2, Vector{4.0, 1.0});
  CHECK(pv.value == doctest::Approx(4.0));
  CHECK(pv.minimizer[0] == doctest::Approx(0.5));
  CHECK(pv.minimizer[1] == doctest::Approx(2.0));
  CHECK(pool_pv_closed(*make_uniswap_v3_tick(1.0, 1.0, 4.0), Vector{1.0, 1.0}) == doctest::Approx(2.0));
  CHECK_THROWS_AS(pool_pv_closed(*make_curve(1.0, 1.0), Vector{1.0, 1.0}), Error);
}

TEST_CASE("v3 piecewise value matches the generic transform on every branch") {
  const auto v3 = make_uniswap_v3_tick(1.0, 1.0, 4.0);
  // p = c1/c2 spans both clamped branches (p < 1/4, p > 4) and the middle one.
  for (double p : {0.01, 0.1, 0.2, 0.25, 0.5, 1.0, 2.0, 4.0, 6.0, 50.0}) {
    const Vector c{p, 1.0};
    const double closed = pool_pv_closed(*v3, c);
    const double generic = portfolio_value_generic(*v3, c).value;
    INFO("p = " << p);
    CHECK(std::abs(closed - generic) <= 1e-7 * std::max(1.0, closed));
    // The minimizer reported with the closed form must be reachable and achieve the value.
    const auto pv = portfolio_value(*v3, c);
    CHECK(std::abs(c[0] * pv.minimizer[0] + c[1] * pv.minimizer[1] - pv.value) <= 1e-12 * std::max(1.0, pv.value));
    CHECK((pv.minimizer[0] + 1.0) * (pv.minimizer[1] + 1.0) >= 4.0 * (1.0 - 1e-12));
  }
  // The corrected lower branch: c = (0.1, 1) costs 0.1 * (k/beta - alpha) = 0.3.
  CHECK(pool_pv_closed(*v3, Vector{0.1, 1.0}) == doctest::Approx(0.3));
}

TEST_CASE("v2 generic value matches 2 sqrt(k c1 c2)") {
  const auto v2 = make_uniswap_v2(2.5);
  std::uniform_real_distribution<double> u(0.05, 5.0);
  for (int i = 0; i < 40; ++i) {
    const Vector c{u(rng()), u(rng())};
    const double want = 2.0 * std::sqrt(2.5 * c[0] * c[1]);
    CHECK(rel_err(portfolio_value_generic(*v2, c).value, want) <= 1e-7);
  }
}

TEST_CASE("uniqueness up to the level transform") {
  const auto v2 = make_uniswap_v2(2.0);
  const PsiLevelSet cubed(
      2, [](std::span<const double> r) { return std::pow(r[0] * r[1], 3); }, 8.0, "cubed");
  for (int i = 0; i < 200; ++i) {
    const Vector r = random_reserves();
    CHECK(rel_err(phi(cubed, r), phi(*v2, r)) <= 1e-8);
  }
}

TEST_CASE("invalid sets and parameters") {
  CHECK_THROWS_AS(make_uniswap_v2(0.0), Error);
  CHECK_THROWS_AS(make_uniswap_v3_tick(2.0, 2.0, 4.0), Error);
  CHECK_THROWS_AS(make_curve(0.0, 1.0), Error);
  CHECK_THROWS_AS(make_lmsr(1.0, 1), Error);
  try {
    PsiLevelSet zero(2, [](std::span<const double> r) { return r[0] + r[1]; }, 0.0);
    FAIL("expected InvalidSet");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidSet);
  }
  CHECK_THROWS_AS(portfolio_value(*make_uniswap_v2(1.0), Vector{-1.0, 1.0}), Error);
  CHECK_THROWS_AS(portfolio_value(*make_uniswap_v2(1.0), Vector{0.0, 0.0}), Error);
}

TEST_CASE("sets are deterministic") {
  const auto lmsr = make_lmsr(1.3, 3);
  const Vector r{0.4, 2.0, 1.1};
  CHECK(phi(*lmsr, r) == phi(*lmsr, r));
  CHECK(portfolio_value(*lmsr, Vector{1.0, 2.0, 0.5}).value ==
        portfolio_value(*lmsr, Vector{1.0, 2.0, 0.5}).value);
}
