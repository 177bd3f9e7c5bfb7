#pragma once

// Scalar root finding and derivative-free convex minimization.
//
// Everything here is a pure function of its arguments. Predicates and
// objectives are taken as template callables so the hot loops inline.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "cfmm/error.hpp"

namespace cfmm {

using Vector = std::vector<double>;

struct Tolerance {
  double rel = 1e-10;
  double abs = 1e-12;
  int max_iter = 200;

  /// Throws InvalidParameter unless rel > 0, abs > 0 and max_iter >= 1.
  void validate() const;

  /// Bisect/golden-section until adjacent doubles; used where results are
  /// differenced afterwards (finite differences, nested solves).
  static Tolerance tight() { return Tolerance{1e-16, 1e-300, 400}; }
};

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
};

/// Which side of the threshold a monotone predicate holds on.
enum class TrueSide { Below, Above };

struct ExpandLimits {
  double min = 1e-300;
  double max = 1e300;
  int max_expansions = 128;
};

struct ScalarMin {
  double argmin = 0.0;
  double min = 0.0;
};

struct VectorMin {
  Vector argmin;
  double min = 0.0;
};

template <class F>
concept ScalarPredicate = requires(F f, double x) {
  { f(x) } -> std::convertible_to<bool>;
};

template <class F>
concept ScalarFunction = requires(F f, double x) {
  { f(x) } -> std::convertible_to<double>;
};

using VectorFunction = std::function<double(std::span<const double>)>;

namespace detail {
inline double width_tol(const Tolerance& tol, double x) {
  return std::max(tol.abs, tol.rel * std::abs(x));
}
}  // namespace detail

/// Locates the switch point of a monotone predicate by bisection.
///
/// The predicate must differ at the two bracket ends. The returned point is
/// always one where the predicate was observed true (the largest tested true
/// point when true lies below the threshold, the smallest when above), so
/// callers treating `true` as "feasible" get a feasible answer.
template <ScalarPredicate Pred>
double bisect_boundary(Pred&& pred, Bracket bracket, const Tolerance& tol = {}) {
  tol.validate();
  double lo = bracket.lo;
  double hi = bracket.hi;
  if (!(lo < hi)) fail(ErrorCode::InvalidParameter, "bisect_boundary: bracket requires lo < hi");
  const bool at_lo = static_cast<bool>(pred(lo));
  const bool at_hi = static_cast<bool>(pred(hi));
  if (at_lo == at_hi) fail(ErrorCode::NonBracketing, "bisect_boundary: predicate equal at both ends");

  for (int it = 0;; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (hi - lo <= detail::width_tol(tol, mid)) break;
    if (it >= tol.max_iter) {
      fail(ErrorCode::MaxIterExceeded, "bisect_boundary: tolerance not met in " +
                                           std::to_string(tol.max_iter) + " steps");
    }
    if (static_cast<bool>(pred(mid)) == at_lo) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return at_lo ? lo : hi;
}

/// Grows a bracket around the threshold of a monotone predicate by doubling or
/// halving from `seed`. Throws NoBracketFound when the limits are exhausted,
/// which callers read as a threshold at 0 or at +infinity.
template <ScalarPredicate Pred>
Bracket expand_bracket(Pred&& pred, double seed, TrueSide side = TrueSide::Below,
                       ExpandLimits limits = {}) {
  if (!(seed > 0.0) || !std::isfinite(seed)) {
    fail(ErrorCode::InvalidParameter, "expand_bracket: seed must be positive and finite");
  }
  const bool at_seed = static_cast<bool>(pred(seed));
  // Move towards the side where the predicate value must change.
  const bool go_up = (side == TrueSide::Below) == at_seed;
  double prev = seed;
  for (int i = 0; i < limits.max_expansions; ++i) {
    const double next = go_up ? prev * 2.0 : prev * 0.5;
    if (next > limits.max || next < limits.min) break;
    if (static_cast<bool>(pred(next)) != at_seed) {
      return go_up ? Bracket{prev, next} : Bracket{next, prev};
    }
    prev = next;
  }
  fail(ErrorCode::NoBracketFound, "expand_bracket: no sign change within range");
}

/// Golden-section search for the minimum of a unimodal function on a closed
/// interval. Convexity is sufficient; quasiconvexity is all that is used.
template <ScalarFunction F>
ScalarMin minimize_scalar_convex(F&& g, Bracket bracket, const Tolerance& tol = {}) {
  tol.validate();
  constexpr double inv_phi = 0.6180339887498948482;
  double a = bracket.lo;
  double b = bracket.hi;
  if (!(a <= b)) fail(ErrorCode::InvalidParameter, "minimize_scalar_convex: bracket requires lo <= hi");

  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = g(x1);
  double f2 = g(x2);
  ScalarMin best = f1 <= f2 ? ScalarMin{x1, f1} : ScalarMin{x2, f2};

  for (int it = 0;; ++it) {
    const double centre = 0.5 * (a + b);
    if (b - a <= detail::width_tol(tol, centre)) break;
    if (x1 >= x2 || x1 <= a || x2 >= b) break;  // interval exhausted at double resolution
    if (it >= tol.max_iter) {
      fail(ErrorCode::MaxIterExceeded, "minimize_scalar_convex: tolerance not met in " +
                                           std::to_string(tol.max_iter) + " steps");
    }
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = g(x1);
      if (f1 < best.min) best = {x1, f1};
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = g(x2);
      if (f2 < best.min) best = {x2, f2};
    }
  }
  return best;
}

/// Box for the log-coordinate searches: every coordinate stays in [min, max].
struct OrthantBox {
  double min = 1e-9;
  double max = 1e9;
};

/// Cyclic coordinate descent over the open positive orthant. Each coordinate
/// is line-searched in log space, which keeps iterates strictly positive.
/// Stops when a full sweep improves the objective by less than
/// rel * |min| + abs.
VectorMin minimize_positive_orthant(const VectorFunction& g, std::size_t dim,
                                    const Tolerance& tol = {}, OrthantBox box = {});

/// Minimizes g over the relative interior of the unit simplex. g is evaluated
/// only at normalized points (sum 1); each coordinate is floored at `floor`.
/// Intended for objectives of degree 0 or 1 homogeneity, whose restriction
/// to the simplex is quasiconvex along the search lines. The search returns
/// early once the objective drops below `stop_below`.
VectorMin minimize_on_simplex(const VectorFunction& g, std::size_t dim,
                              const Tolerance& tol = {}, double floor = 1e-9,
                              double stop_below = -std::numeric_limits<double>::infinity());

/// Coordinate descent in log coordinates over the box lo <= x <= hi (lo > 0),
/// starting from `start`. Coordinates with lo == hi are held fixed.
VectorMin minimize_log_box(const VectorFunction& g, std::span<const double> lo,
                           std::span<const double> hi, std::span<const double> start,
                           const Tolerance& tol = {});

}  // namespace cfmm
