#include "cfmm/reachable.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cfmm {

ReachableSet::ReachableSet(std::size_t dim) : dim_(dim) {
  if (dim == 0) fail(ErrorCode::InvalidParameter, "reachable set dimension must be >= 1");
}

bool ReachableSet::contains(std::span<const double> reserves) const {
  require_dim(dim_, reserves.size(), "contains");
  for (double r : reserves) {
    if (!(r >= 0.0)) return false;
  }
  return contains_nonneg(reserves);
}

void ReachableSet::reject_zero_member() const {
  const Vector zero(dim_, 0.0);
  if (contains_nonneg(zero)) {
    fail(ErrorCode::InvalidSet, describe() + ": the zero vector is reachable");
  }
}

bool PsiSet::contains_nonneg(std::span<const double> reserves) const {
  return psi_value(reserves) - psi_level() >= -kMembershipSlack;
}

PsiLevelSet::PsiLevelSet(std::size_t dim, Psi psi, double level, std::string name)
    : PsiSet(dim), psi_(std::move(psi)), level_(level), name_(std::move(name)) {
  if (!psi_) fail(ErrorCode::InvalidParameter, "PsiLevelSet: empty psi");
  reject_zero_member();
}

void require_nonnegative(std::span<const double> v, std::string_view what) {
  for (double x : v) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      fail(ErrorCode::InvalidParameter, std::string(what) + ": entries must be finite and >= 0");
    }
  }
}

void require_prices(std::span<const double> c, std::string_view what) {
  require_nonnegative(c, what);
  if (std::all_of(c.begin(), c.end(), [](double x) { return x == 0.0; })) {
    fail(ErrorCode::InvalidParameter, std::string(what) + ": prices must not all be zero");
  }
}

bool contains(const ReachableSet& set, std::span<const double> reserves) {
  return set.contains(reserves);
}

double phi_bisection(const ReachableSet& set, std::span<const double> reserves,
                     const Tolerance& tol) {
  require_dim(set.dim(), reserves.size(), "phi");
  require_nonnegative(reserves, "phi");
  const double seed = *std::max_element(reserves.begin(), reserves.end());
  if (seed == 0.0) return 0.0;

  Vector scaled(reserves.size());
  auto feasible = [&](double lambda) {
    for (std::size_t i = 0; i < scaled.size(); ++i) scaled[i] = reserves[i] / lambda;
    return set.contains(scaled);
  };

  Bracket bracket;
  try {
    // Below 1e-12 of the seed scale we call R unreachable at every positive scale.
    bracket = expand_bracket(feasible, seed, TrueSide::Below,
                             ExpandLimits{seed * 1e-12, seed * 1e300, 128});
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoBracketFound) throw;
    if (!feasible(seed)) return 0.0;
    throw;
  }
  return bisect_boundary(feasible, bracket, tol);
}

double phi(const ReachableSet& set, std::span<const double> reserves, const Tolerance& tol) {
  require_dim(set.dim(), reserves.size(), "phi");
  require_nonnegative(reserves, "phi");
  if (auto closed = set.phi_closed(reserves)) return *closed;
  return phi_bisection(set, reserves, tol);
}

ReserveVector scale_to_boundary(const ReachableSet& set, std::span<const double> reserves,
                                const Tolerance& tol) {
  const double value = phi(set, reserves, tol);
  if (!(value > 0.0)) fail(ErrorCode::ZeroLiquidity, "scale_to_boundary: phi(R) = 0");
  ReserveVector out(reserves.begin(), reserves.end());
  for (double& r : out) r /= value;
  return out;
}

namespace {

PriceVector numeraire_normalize(Vector grad) {
  const double last = grad.back();
  if (!(last > 0.0)) {
    fail(ErrorCode::NonSmoothPoint, "marginal_prices: numeraire has no positive marginal price");
  }
  for (double& g : grad) g /= last;
  return grad;
}

}  // namespace

PriceVector marginal_prices(const ReachableSet& set, std::span<const double> reserves,
                            [[maybe_unused]] const Tolerance& tol) {
  require_dim(set.dim(), reserves.size(), "marginal_prices");
  for (double r : reserves) {
    if (!(r > 0.0)) fail(ErrorCode::InvalidParameter, "marginal_prices: reserves must be > 0");
  }
  if (auto grad = set.grad_phi_closed(reserves)) return numeraire_normalize(std::move(*grad));

  // phi is differenced below, so it has to be accurate to the last few bits.
  const Tolerance inner = Tolerance::tight();
  Vector point(reserves.begin(), reserves.end());
  const double centre = phi(set, point, inner);
  Vector grad(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) {
    const double h = std::min(1e-6 * std::max(1.0, point[i]), 0.5 * point[i]);
    const double saved = point[i];
    point[i] = saved + h;
    const double up = phi(set, point, inner);
    point[i] = saved - h;
    const double down = phi(set, point, inner);
    point[i] = saved;
    const double forward = (up - centre) / h;
    const double backward = (centre - down) / h;
    const double scale = std::max({std::abs(forward), std::abs(backward), 1e-300});
    if (std::abs(forward - backward) > 1e-4 * scale) {
      fail(ErrorCode::NonSmoothPoint, "marginal_prices: one-sided derivatives disagree in asset " +
                                          std::to_string(i));
    }
    grad[i] = (up - down) / (2.0 * h);
  }
  return numeraire_normalize(std::move(grad));
}

PortfolioValue portfolio_value_generic(const ReachableSet& set, std::span<const double> prices,
                                       const Tolerance& tol) {
  require_dim(set.dim(), prices.size(), "portfolio_value");
  require_prices(prices, "portfolio_value");
  const Tolerance inner = Tolerance::tight();
  auto ratio = [&](std::span<const double> r) {
    const double p = phi(set, r, inner);
    if (!(p > 0.0)) return std::numeric_limits<double>::infinity();
    double dot = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) dot += prices[i] * r[i];
    return dot / p;
  };
  VectorMin best = minimize_on_simplex(ratio, set.dim(), tol);
  PortfolioValue out;
  out.minimizer = scale_to_boundary(set, best.argmin, inner);
  double dot = 0.0;
  for (std::size_t i = 0; i < prices.size(); ++i) dot += prices[i] * out.minimizer[i];
  out.value = dot;
  return out;
}

PortfolioValue portfolio_value(const ReachableSet& set, std::span<const double> prices,
                               const Tolerance& tol) {
  require_dim(set.dim(), prices.size(), "portfolio_value");
  require_prices(prices, "portfolio_value");
  if (auto closed = set.pv_closed(prices, tol)) return *closed;
  return portfolio_value_generic(set, prices, tol);
}

}  // namespace cfmm
