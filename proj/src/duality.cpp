#include "cfmm/duality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cfmm {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

PortfolioValueFn portfolio_value_fn(SetPtr set, const Tolerance& tol) {
  const std::size_t dim = set->dim();
  return PortfolioValueFn{dim, [set = std::move(set), tol](std::span<const double> c) {
                            return portfolio_value(*set, c, tol).value;
                          }};
}

TradingFn trading_fn(SetPtr set, const Tolerance& tol) {
  const std::size_t dim = set->dim();
  return TradingFn{dim, [set = std::move(set), tol](std::span<const double> r) {
                     return phi(*set, r, tol);
                   }};
}

bool cone_contains(const ReachableSet& set, const LiquidityConePoint& point) {
  require_dim(set.dim(), point.reserves.size(), "cone_contains");
  if (!(point.scale >= 0.0)) fail(ErrorCode::InvalidParameter, "cone_contains: scale must be >= 0");
  if (point.scale == 0.0) {
    // Closure of the cone at l = 0 is the recession cone of S, i.e. the orthant.
    return std::all_of(point.reserves.begin(), point.reserves.end(),
                       [](double r) { return r >= 0.0; });
  }
  Vector scaled = point.reserves;
  for (double& r : scaled) r /= point.scale;
  return set.contains(scaled);
}

bool dual_cone_contains(const PortfolioValueFn& value, const DualConePoint& point) {
  require_dim(value.dim, point.price.size(), "dual_cone_contains");
  for (double c : point.price) {
    if (!(c >= 0.0)) return false;
  }
  if (point.offset >= 0.0) return true;
  if (std::all_of(point.price.begin(), point.price.end(), [](double c) { return c == 0.0; })) {
    return false;
  }
  return value(point.price) + point.offset >= -1e-12 * std::max(1.0, std::abs(point.offset));
}

double pv_from_phi(const TradingFn& phi_fn, std::span<const double> prices, const Tolerance& tol) {
  require_dim(phi_fn.dim, prices.size(), "pv_from_phi");
  require_prices(prices, "pv_from_phi");
  auto ratio = [&](std::span<const double> r) {
    const double p = phi_fn(r);
    return p > 0.0 ? dot(prices, r) / p : kInf;
  };
  return minimize_on_simplex(ratio, phi_fn.dim, tol).min;
}

double phi_from_pv(const PortfolioValueFn& value, std::span<const double> reserves,
                   const Tolerance& tol) {
  require_dim(value.dim, reserves.size(), "phi_from_pv");
  for (double r : reserves) {
    if (!(r > 0.0)) fail(ErrorCode::InvalidParameter, "phi_from_pv: reserves must be > 0");
  }
  auto ratio = [&](std::span<const double> c) {
    const double v = value(c);
    return v > 0.0 ? dot(c, reserves) / v : kInf;
  };
  return minimize_on_simplex(ratio, value.dim, tol).min;
}

double rmm_membership_slack(std::span<const double> reserves) {
  double scale = 1.0;
  for (double r : reserves) scale = std::max(scale, std::abs(r));
  return 1e-12 * scale;
}

Phi0 rmm_phi0(const PortfolioValueFn& value, std::span<const double> reserves,
              const Tolerance& tol) {
  require_dim(value.dim, reserves.size(), "rmm_phi0");
  require_nonnegative(reserves, "rmm_phi0");
  auto gap = [&](std::span<const double> c) { return dot(c, reserves) - value(c); };
  VectorMin m = minimize_on_simplex(gap, value.dim, tol);
  return Phi0{m.min, std::move(m.argmin)};
}

std::optional<SeparationCertificate> separation_certificate(SetPtr set,
                                                            std::span<const double> reserves,
                                                            const Tolerance& tol) {
  require_dim(set->dim(), reserves.size(), "separation_certificate");
  require_nonnegative(reserves, "separation_certificate");
  if (set->contains(reserves)) return std::nullopt;
  const PortfolioValueFn value = portfolio_value_fn(set, tol);
  Phi0 witness = rmm_phi0(value, reserves, tol);
  // Recompute from scratch so the certificate stands on its own.
  const double gap = value(witness.argmin) - dot(witness.argmin, reserves);
  if (!(gap > rmm_membership_slack(reserves))) return std::nullopt;
  return SeparationCertificate{std::move(witness.argmin), gap};
}

}  // namespace cfmm
