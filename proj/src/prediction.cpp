#include "cfmm/prediction.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace cfmm {

namespace {

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) fail(ErrorCode::InvalidParameter, std::string(what) + ": entries must be finite");
  }
}

class CostSet final : public ReachableSet {
 public:
  CostSet(CostFn cost, std::string name)
      : ReachableSet(cost.dim), cost_(std::move(cost)), name_(std::move(name)) {
    reject_zero_member();
  }

  std::string describe() const override { return name_; }

 protected:
  bool contains_nonneg(std::span<const double> r) const override {
    Vector neg(r.begin(), r.end());
    for (double& x : neg) x = -x;
    return cost_(neg) <= 1e-12;
  }

 private:
  CostFn cost_;
  std::string name_;
};

}  // namespace

double cost_from_set(const ReachableSet& set, std::span<const double> q, const Tolerance& tol) {
  require_dim(set.dim(), q.size(), "cost_from_set");
  require_finite(q, "cost_from_set");
  const double top = *std::max_element(q.begin(), q.end());
  Vector gap(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) gap[i] = top - q[i];

  // a = top + t; feasibility is monotone in t because S is upward closed.
  Vector point(q.size());
  auto feasible = [&](double t) {
    for (std::size_t i = 0; i < q.size(); ++i) point[i] = gap[i] + t;
    return set.contains(point);
  };
  if (feasible(0.0)) return top;
  Bracket b;
  try {
    b = expand_bracket(feasible, 1.0, TrueSide::Above);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoBracketFound) throw;
    if (feasible(1e-300)) return top;
    throw;
  }
  return top + bisect_boundary(feasible, b, tol);
}

CostFn cost_fn_from_set(SetPtr set, const Tolerance& tol) {
  const std::size_t n = set->dim();
  return CostFn{n, [set = std::move(set), tol](std::span<const double> q) {
                  return cost_from_set(*set, q, tol);
                }};
}

SetPtr set_from_cost(CostFn cost, std::string name) {
  if (cost.dim == 0 || !cost.eval) fail(ErrorCode::InvalidParameter, "set_from_cost: empty cost function");
  return std::make_shared<CostSet>(std::move(cost), std::move(name));
}

double lmsr_cost(double b, std::span<const double> q) {
  if (!(b > 0.0) || !std::isfinite(b)) fail(ErrorCode::InvalidParameter, "lmsr_cost: b must be > 0");
  if (q.empty()) fail(ErrorCode::InvalidParameter, "lmsr_cost: empty share vector");
  require_finite(q, "lmsr_cost");
  const double top = *std::max_element(q.begin(), q.end()) / b;
  double sum = 0.0;
  for (double x : q) sum += std::exp(x / b - top);
  return b * (top + std::log(sum));
}

CostFn lmsr_cost_fn(double b, std::size_t n) {
  if (!(b > 0.0)) fail(ErrorCode::InvalidParameter, "lmsr_cost_fn: b must be > 0");
  if (n == 0) fail(ErrorCode::InvalidParameter, "lmsr_cost_fn: n must be >= 1");
  return CostFn{n, [b](std::span<const double> q) { return lmsr_cost(b, q); }};
}

double expected_payoff(const CostFn& cost, std::span<const double> q0, std::span<const double> p,
                       const Tolerance& tol, double half_width) {
  require_dim(cost.dim, q0.size(), "expected_payoff");
  require_dim(cost.dim, p.size(), "expected_payoff");
  tol.validate();
  double total = 0.0;
  for (double x : p) {
    if (!(x >= 0.0)) fail(ErrorCode::InvalidParameter, "expected_payoff: probabilities must be >= 0");
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-9) fail(ErrorCode::InvalidParameter, "expected_payoff: probabilities must sum to 1");
  if (!(half_width > 0.0)) fail(ErrorCode::InvalidParameter, "expected_payoff: half_width must be > 0");

  const std::size_t n = cost.dim;
  const double base = cost(q0);
  Vector q(n, 0.0);
  Vector shifted(q0.begin(), q0.end());
  auto objective = [&](std::span<const double> x) {
    double gain = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      gain += p[i] * x[i];
      shifted[i] = q0[i] + x[i];
    }
    return gain - (cost(shifted) - base);
  };

  double cur = objective(q);
  for (int sweep = 0;; ++sweep) {
    if (sweep >= tol.max_iter) fail(ErrorCode::MaxIterExceeded, "expected_payoff: coordinate ascent did not settle");
    const double before = cur;
    for (std::size_t i = 0; i < n; ++i) {
      auto line = [&](double t) {
        const double keep = q[i];
        q[i] = t;
        const double v = -objective(q);
        q[i] = keep;
        return v;
      };
      const ScalarMin m = minimize_scalar_convex(line, {-half_width, half_width}, tol);
      if (-m.min > cur) {
        q[i] = m.argmin;
        cur = -m.min;
      }
    }
    if (cur - before <= tol.rel * std::abs(cur) + tol.abs) break;
  }
  return cur;
}

}  // namespace cfmm
