#pragma once

// Prediction-market cost functions and their reachable sets.
//
//   C(q) = min { a : a 1 - q in S }        S = { R >= 0 : C(-R) <= 0 }
//
// A cost function is convex, nondecreasing and translation invariant,
// C(q + a 1) = C(q) + a.

#include <cstddef>
#include <functional>
#include <span>

#include "cfmm/reachable.hpp"

namespace cfmm {

using ShareVector = Vector;

struct CostFn {
  std::size_t dim = 0;
  std::function<double(std::span<const double>)> eval;

  double operator()(std::span<const double> q) const { return eval(q); }
};

/// Cost implied by a reachable set: the least a with a 1 - q in S. The
/// search runs over a >= max_i q_i, where a 1 - q is nonnegative.
double cost_from_set(const ReachableSet& set, std::span<const double> q, const Tolerance& tol = {});

CostFn cost_fn_from_set(SetPtr set, const Tolerance& tol = {});

/// { R >= 0 : C(-R) <= 1e-12 }. Raises InvalidSet if 0 is a member.
SetPtr set_from_cost(CostFn cost, std::string name = "cost_set");

/// b log sum exp(q_i / b), shifted by the max for stability.
double lmsr_cost(double b, std::span<const double> q);

CostFn lmsr_cost_fn(double b, std::size_t n);

/// max over q of p^T q - (C(q0 + q) - C(q0)), by cyclic coordinate ascent in
/// the box q in [-half_width, half_width]^n.
double expected_payoff(const CostFn& cost, std::span<const double> q0, std::span<const double> p,
                       const Tolerance& tol = {}, double half_width = 50.0);

}  // namespace cfmm
