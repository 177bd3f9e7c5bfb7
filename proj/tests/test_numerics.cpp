#include <doctest.h>

#include <cmath>
#include <random>

#include "cfmm/numerics.hpp"

using namespace cfmm;

TEST_CASE("bisect_boundary returns the feasible end within the width tolerance") {
  const double root = std::sqrt(2.0);
  auto below = [&](double x) { return x * x <= 2.0; };
  const Tolerance tol;
  const double x = bisect_boundary(below, {0.0, 4.0}, tol);
  CHECK(below(x));
  const double width = std::max(tol.abs, tol.rel * x);
  CHECK(!below(x + width));
  CHECK(std::abs(x - root) <= width);

  auto above = [&](double x) { return x * x >= 2.0; };
  const double y = bisect_boundary(above, {0.0, 4.0}, tol);
  CHECK(above(y));
  CHECK(std::abs(y - root) <= std::max(tol.abs, tol.rel * y));
}

TEST_CASE("bisect_boundary at tight tolerance reaches adjacent doubles") {
  auto below = [](double x) { return x * x <= 2.0; };
  const double x = bisect_boundary(below, {1.0, 2.0}, Tolerance::tight());
  CHECK(below(x));
  CHECK(!below(std::nextafter(x, 3.0)));
}

TEST_CASE("bisect_boundary errors") {
  auto always = [](double) { return true; };
  CHECK_THROWS_AS(bisect_boundary(always, {0.0, 1.0}), Error);
  try {
    bisect_boundary(always, {0.0, 1.0});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonBracketing);
  }
  auto below = [](double x) { return x <= 0.3; };
  try {
    bisect_boundary(below, {0.0, 1.0}, Tolerance{1e-300, 1e-300, 5});
    FAIL("expected MaxIterExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MaxIterExceeded);
  }
  CHECK_THROWS_AS(bisect_boundary(below, {1.0, 0.0}), Error);
}

TEST_CASE("expand_bracket grows and shrinks towards the threshold") {
  auto below_big = [](double x) { return x <= 1e5; };
  Bracket b = expand_bracket(below_big, 1.0, TrueSide::Below);
  CHECK(below_big(b.lo));
  CHECK(!below_big(b.hi));
  CHECK(b.hi == 2.0 * b.lo);

  auto above_small = [](double x) { return x >= 1e-7; };
  b = expand_bracket(above_small, 1.0, TrueSide::Above);
  CHECK(!above_small(b.lo));
  CHECK(above_small(b.hi));

  auto always = [](double) { return true; };
  try {
    expand_bracket(always, 1.0, TrueSide::Below);
    FAIL("expected NoBracketFound");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoBracketFound);
  }
}

TEST_CASE("golden section on x + 1/x") {
  auto g = [](double x) { return x + 1.0 / x; };
  for (Bracket b : {Bracket{0.1, 7.0}, Bracket{1e-3, 100.0}, Bracket{0.5, 1.5}, Bracket{1.0, 3.0}}) {
    const ScalarMin m = minimize_scalar_convex(g, b);
    CHECK(std::abs(m.min - 2.0) <= 1e-9);
    CHECK(std::abs(m.argmin - 1.0) <= 1e-4);
  }
}

TEST_CASE("simplex minimization finds an interior target") {
  const Vector target{0.2, 0.5, 0.3};
  auto g = [&](std::span<const double> c) {
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) s += (c[i] - target[i]) * (c[i] - target[i]);
    return s;
  };
  const VectorMin m = minimize_on_simplex(g, 3);
  double sum = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::abs(m.argmin[i] - target[i]) <= 1e-5);
    sum += m.argmin[i];
  }
  CHECK(std::abs(sum - 1.0) <= 1e-14);
  CHECK(m.min <= 1e-10);
}

TEST_CASE("simplex minimization of a linear function lands at the floored vertex") {
  auto g = [](std::span<const double> c) { return 3.0 * c[0] + 1.0 * c[1] + 2.0 * c[2]; };
  const VectorMin m = minimize_on_simplex(g, 3);
  CHECK(m.argmin[1] > 1.0 - 1e-8);
  CHECK(std::abs(m.min - 1.0) <= 1e-8);
}

TEST_CASE("orthant and log-box minimization") {
  const Vector a{0.5, 3.0};
  auto g = [&](std::span<const double> x) {
    return (x[0] - a[0]) * (x[0] - a[0]) + (x[1] - a[1]) * (x[1] - a[1]);
  };
  const VectorMin m = minimize_positive_orthant(g, 2);
  CHECK(std::abs(m.argmin[0] - a[0]) <= 1e-5);
  CHECK(std::abs(m.argmin[1] - a[1]) <= 1e-5);

  const Vector lo{1.0, 1.0}, hi{10.0, 1.0}, start{2.0, 1.0};
  const VectorMin b = minimize_log_box(g, lo, hi, start);
  CHECK(b.argmin[0] >= 1.0);
  CHECK(b.argmin[0] <= 1.0 + 1e-6);
  CHECK(b.argmin[1] == 1.0);
}

TEST_CASE("solvers are deterministic") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  const Vector w{u(rng), u(rng), u(rng)};
  auto g = [&](std::span<const double> c) {
    double s = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) s += w[i] / c[i];
    return s;
  };
  const VectorMin a = minimize_on_simplex(g, 3);
  const VectorMin b = minimize_on_simplex(g, 3);
  CHECK(a.min == b.min);
  CHECK(a.argmin == b.argmin);
}

TEST_CASE("tolerance validation") {
  CHECK_THROWS_AS((Tolerance{0.0, 1e-12, 10}.validate()), Error);
  CHECK_THROWS_AS((Tolerance{1e-10, 1e-12, 0}.validate()), Error);
  CHECK_NOTHROW(Tolerance{}.validate());
  CHECK_NOTHROW(Tolerance::tight().validate());
}
