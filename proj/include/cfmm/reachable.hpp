#pragma once

// Fee-free CFMMs described by their set of reachable reserves.
//
// A reachable set S lives in the nonnegative orthant, is closed, convex and
// upward closed. Everything else (canonical trading function, prices,
// portfolio value) is derived from the membership test, with closed forms
// used when a concrete set supplies them.

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "cfmm/numerics.hpp"

namespace cfmm {

using ReserveVector = Vector;
using PriceVector = Vector;

/// Absolute slack on psi(R) - level for boundary membership.
inline constexpr double kMembershipSlack = 1e-12;

/// Minimum of c^T R over a set together with a minimizing reserve vector.
/// `minimizer` is empty when the infimum is not attained (a zero price).
struct PortfolioValue {
  double value = 0.0;
  ReserveVector minimizer;
};

class ReachableSet {
 public:
  virtual ~ReachableSet() = default;

  std::size_t dim() const noexcept { return dim_; }

  /// True iff R is in the set. Vectors with a negative entry are never members.
  bool contains(std::span<const double> reserves) const;

  /// Quasiconcave representation: R is a member iff psi(R) >= psi_level().
  virtual std::optional<double> psi(std::span<const double> /*reserves*/) const { return std::nullopt; }
  virtual double psi_level() const { return 0.0; }

  virtual std::optional<double> phi_closed(std::span<const double> /*reserves*/) const {
    return std::nullopt;
  }
  virtual std::optional<Vector> grad_phi_closed(std::span<const double> /*reserves*/) const {
    return std::nullopt;
  }
  /// Exact or structural portfolio value; composed sets build it from their children.
  virtual std::optional<PortfolioValue> pv_closed(std::span<const double> /*prices*/,
                                                  const Tolerance& /*tol*/) const {
    return std::nullopt;
  }

  virtual std::string describe() const = 0;

 protected:
  explicit ReachableSet(std::size_t dim);

  /// Membership for a vector already known to be nonnegative and of the right size.
  virtual bool contains_nonneg(std::span<const double> reserves) const = 0;

  /// Throws InvalidSet when the zero vector is a member; derived constructors call it last.
  void reject_zero_member() const;

 private:
  std::size_t dim_;
};

using SetPtr = std::shared_ptr<const ReachableSet>;

/// Base for sets written as a superlevel set {R >= 0 : psi(R) >= level}.
class PsiSet : public ReachableSet {
 public:
  std::optional<double> psi(std::span<const double> reserves) const final {
    return psi_value(reserves);
  }

 protected:
  using ReachableSet::ReachableSet;
  virtual double psi_value(std::span<const double> reserves) const = 0;
  bool contains_nonneg(std::span<const double> reserves) const override;
};

/// A superlevel set of a caller-supplied quasiconcave, nondecreasing psi.
class PsiLevelSet final : public PsiSet {
 public:
  using Psi = std::function<double(std::span<const double>)>;
  PsiLevelSet(std::size_t dim, Psi psi, double level, std::string name = "psi_level_set");

  double psi_level() const override { return level_; }
  std::string describe() const override { return name_; }

 protected:
  double psi_value(std::span<const double> reserves) const override { return psi_(reserves); }

 private:
  Psi psi_;
  double level_;
  std::string name_;
};

/// A point (R, lambda) of the liquidity cone candidate space.
struct LiquidityConePoint {
  ReserveVector reserves;
  double scale = 0.0;
};

bool contains(const ReachableSet& set, std::span<const double> reserves);

/// Canonical trading function sup{lambda > 0 : R / lambda in S}; 0 if no
/// positive scaling is feasible. Uses the set's closed form when it has one.
double phi(const ReachableSet& set, std::span<const double> reserves, const Tolerance& tol = {});

/// Same quantity, always by bisection on the membership predicate.
double phi_bisection(const ReachableSet& set, std::span<const double> reserves,
                     const Tolerance& tol = {});

/// R / phi(R): the point where the ray through R meets the boundary of S.
ReserveVector scale_to_boundary(const ReachableSet& set, std::span<const double> reserves,
                                const Tolerance& tol = {});

/// Gradient of phi at a strictly positive R, scaled so the last asset is the
/// numeraire (price 1). Raises NonSmoothPoint at kinks.
PriceVector marginal_prices(const ReachableSet& set, std::span<const double> reserves,
                            const Tolerance& tol = {});

/// inf { c^T R : R in S } for nonnegative, nonzero prices.
PortfolioValue portfolio_value(const ReachableSet& set, std::span<const double> prices,
                               const Tolerance& tol = {});

/// Portfolio value through the canonical trading function:
/// the minimum over the reserve simplex of c^T R / phi(R).
PortfolioValue portfolio_value_generic(const ReachableSet& set, std::span<const double> prices,
                                       const Tolerance& tol = {});

void require_nonnegative(std::span<const double> v, std::string_view what);
void require_prices(std::span<const double> c, std::string_view what);

}  // namespace cfmm
