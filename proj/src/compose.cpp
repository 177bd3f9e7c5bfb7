#include "cfmm/compose.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cfmm/duality.hpp"

namespace cfmm {

// ------------------------------------------------------------- AssetMapping

void AssetMapping::validate() const {
  if (local_to_global.empty()) fail(ErrorCode::InvalidParameter, "AssetMapping: no assets mapped");
  std::vector<bool> seen(global_dim, false);
  for (std::size_t g : local_to_global) {
    if (g >= global_dim) {
      fail(ErrorCode::IndexOutOfRange, "AssetMapping: index " + std::to_string(g) +
                                           " outside universe of " + std::to_string(global_dim));
    }
    if (seen[g]) fail(ErrorCode::IndexOutOfRange, "AssetMapping: index " + std::to_string(g) + " repeated");
    seen[g] = true;
  }
}

AssetMapping AssetMapping::identity(std::size_t n) {
  AssetMapping m;
  m.global_dim = n;
  m.local_to_global.resize(n);
  for (std::size_t i = 0; i < n; ++i) m.local_to_global[i] = i;
  return m;
}

Vector AssetMapping::restrict(std::span<const double> global) const {
  require_dim(global_dim, global.size(), "AssetMapping::restrict");
  Vector out(local_to_global.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = global[local_to_global[i]];
  return out;
}

Vector AssetMapping::embed(std::span<const double> local) const {
  require_dim(local_to_global.size(), local.size(), "AssetMapping::embed");
  Vector out(global_dim, 0.0);
  for (std::size_t i = 0; i < local.size(); ++i) out[local_to_global[i]] = local[i];
  return out;
}

ComposedSet::ComposedSet(Kind kind, std::size_t dim, std::vector<SetPtr> children)
    : ReachableSet(dim), kind_(kind), children_(std::move(children)) {}

namespace {

std::string list(const std::vector<SetPtr>& sets, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (i) out += sep;
    out += sets[i]->describe();
  }
  return out;
}

void require_children(const std::vector<SetPtr>& sets, const char* where) {
  if (sets.empty()) fail(ErrorCode::InvalidParameter, std::string(where) + ": no sets given");
  for (const auto& s : sets) {
    if (!s) fail(ErrorCode::InvalidParameter, std::string(where) + ": null set");
    require_dim(sets.front()->dim(), s->dim(), where);
  }
}

// --------------------------------------------------------------- ScaledSet

class ScaledSet final : public ComposedSet {
 public:
  ScaledSet(double alpha, SetPtr child)
      : ComposedSet(Kind::Scaled, child->dim(), {child}), alpha_(alpha) {
    reject_zero_member();
  }

  std::optional<double> phi_closed(std::span<const double> r) const override {
    // R / l in alpha S  <=>  (R / alpha) / l in S
    return phi(*children().front(), r) / alpha_;
  }

  std::optional<Vector> grad_phi_closed(std::span<const double> r) const override {
    Vector shrunk = scaled(r, 1.0 / alpha_);
    auto g = children().front()->grad_phi_closed(shrunk);
    if (!g) return std::nullopt;
    for (double& x : *g) x /= alpha_;
    return g;
  }

  std::optional<PortfolioValue> pv_closed(std::span<const double> c,
                                          const Tolerance& tol) const override {
    PortfolioValue child = portfolio_value(*children().front(), c, tol);
    child.value *= alpha_;
    for (double& x : child.minimizer) x *= alpha_;
    return child;
  }

  std::string describe() const override {
    std::ostringstream os;
    os.precision(17);
    os << "scaled(" << alpha_ << ", " << children().front()->describe() << ")";
    return os.str();
  }

 protected:
  bool contains_nonneg(std::span<const double> r) const override {
    return children().front()->contains(scaled(r, 1.0 / alpha_));
  }

 private:
  static Vector scaled(std::span<const double> r, double f) {
    Vector out(r.begin(), r.end());
    for (double& x : out) x *= f;
    return out;
  }

  double alpha_;
};

// ------------------------------------------------------------------ SumSet

class SumSet final : public ComposedSet {
 public:
  SumSet(std::vector<SetPtr> sets, const Tolerance& tol)
      : ComposedSet(Kind::Sum, sets.front()->dim(), sets), tol_(tol) {
    reject_zero_member();
  }

  std::optional<PortfolioValue> pv_closed(std::span<const double> c,
                                          const Tolerance& tol) const override {
    PortfolioValue total{0.0, Vector(dim(), 0.0)};
    bool attained = true;
    for (const auto& child : children()) {
      PortfolioValue part = portfolio_value(*child, c, tol);
      total.value += part.value;
      if (part.minimizer.empty()) {
        attained = false;
      } else {
        for (std::size_t i = 0; i < dim(); ++i) total.minimizer[i] += part.minimizer[i];
      }
    }
    if (!attained) total.minimizer.clear();
    return total;
  }

  std::string describe() const override { return "sum(" + list(children(), ", ") + ")"; }

 protected:
  bool contains_nonneg(std::span<const double> r) const override {
    auto gap = [&](std::span<const double> c) {
      double value = 0.0;
      for (std::size_t i = 0; i < c.size(); ++i) value += c[i] * r[i];
      for (const auto& child : children()) value -= portfolio_value(*child, c, tol_).value;
      return value;
    };
    const double slack = rmm_membership_slack(r);
    return minimize_on_simplex(gap, dim(), tol_, 1e-9, -slack).min >= -slack;
  }

 private:
  Tolerance tol_;
};

// --------------------------------------------------------- IntersectionSet

class IntersectionSet final : public ComposedSet {
 public:
  explicit IntersectionSet(std::vector<SetPtr> sets)
      : ComposedSet(Kind::Intersection, sets.front()->dim(), sets) {
    reject_zero_member();
  }

  // R / l lies in every child iff l <= phi_i(R) for all i.
  std::optional<double> phi_closed(std::span<const double> r) const override {
    double out = std::numeric_limits<double>::infinity();
    for (const auto& child : children()) out = std::min(out, phi(*child, r));
    return out;
  }

  std::string describe() const override {
    return "intersection(" + list(children(), ", ") + ")";
  }

 protected:
  bool contains_nonneg(std::span<const double> r) const override {
    return std::all_of(children().begin(), children().end(),
                       [&](const SetPtr& s) { return s->contains(r); });
  }
};

// --------------------------------------------------------- AssetImageSet

class AssetImageSet final : public ComposedSet {
 public:
  AssetImageSet(AssetMapping mapping, SetPtr child)
      : ComposedSet(Kind::AssetImage, mapping.global_dim, {child}), mapping_(std::move(mapping)) {
    reject_zero_member();
  }

  std::optional<double> phi_closed(std::span<const double> r) const override {
    return phi(*children().front(), mapping_.restrict(r));
  }

  std::optional<Vector> grad_phi_closed(std::span<const double> r) const override {
    auto g = children().front()->grad_phi_closed(mapping_.restrict(r));
    if (!g) return std::nullopt;
    return mapping_.embed(*g);
  }

  std::optional<PortfolioValue> pv_closed(std::span<const double> c,
                                          const Tolerance& tol) const override {
    const Vector local = mapping_.restrict(c);
    const SetPtr& child = children().front();
    PortfolioValue out;
    if (std::all_of(local.begin(), local.end(), [](double x) { return x == 0.0; })) {
      // Any point of the child costs nothing at these prices.
      out.value = 0.0;
      out.minimizer = mapping_.embed(scale_to_boundary(*child, Vector(local.size(), 1.0)));
      return out;
    }
    PortfolioValue part = portfolio_value(*child, local, tol);
    out.value = part.value;
    if (!part.minimizer.empty()) out.minimizer = mapping_.embed(part.minimizer);
    return out;
  }

  std::string describe() const override {
    std::string idx;
    for (std::size_t i = 0; i < mapping_.local_to_global.size(); ++i) {
      if (i) idx += ",";
      idx += std::to_string(mapping_.local_to_global[i]);
    }
    return "asset_image([" + idx + "] of " + std::to_string(mapping_.global_dim) + ", " +
           children().front()->describe() + ")";
  }

 protected:
  bool contains_nonneg(std::span<const double> r) const override {
    return children().front()->contains(mapping_.restrict(r));
  }

 private:
  AssetMapping mapping_;
};

}  // namespace

ComposedPtr scale_set(double alpha, SetPtr set) {
  if (!set) fail(ErrorCode::InvalidParameter, "scale_set: null set");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    fail(ErrorCode::InvalidScale, "scale_set: alpha must be positive and finite");
  }
  return std::make_shared<ScaledSet>(alpha, std::move(set));
}

ComposedPtr sum_sets(std::vector<SetPtr> sets, const Tolerance& tol) {
  require_children(sets, "sum_sets");
  tol.validate();
  return std::make_shared<SumSet>(std::move(sets), tol);
}

ComposedPtr intersect_sets(std::vector<SetPtr> sets) {
  require_children(sets, "intersect_sets");
  return std::make_shared<IntersectionSet>(std::move(sets));
}

ComposedPtr asset_image(AssetMapping mapping, SetPtr set) {
  if (!set) fail(ErrorCode::InvalidParameter, "asset_image: null set");
  mapping.validate();
  require_dim(set->dim(), mapping.local_to_global.size(), "asset_image");
  return std::make_shared<AssetImageSet>(std::move(mapping), std::move(set));
}

ComposedPtr aggregate(std::vector<std::pair<SetPtr, AssetMapping>> children, const Tolerance& tol) {
  if (children.empty()) fail(ErrorCode::InvalidParameter, "aggregate: no pools given");
  const std::size_t n = children.front().second.global_dim;
  std::vector<SetPtr> images;
  images.reserve(children.size());
  for (auto& [set, mapping] : children) {
    require_dim(n, mapping.global_dim, "aggregate");
    images.push_back(asset_image(std::move(mapping), std::move(set)));
  }
  if (images.size() == 1) return std::static_pointer_cast<const ComposedSet>(images.front());
  return sum_sets(std::move(images), tol);
}

double composed_pv(const ReachableSet& set, std::span<const double> prices, const Tolerance& tol) {
  return portfolio_value(set, prices, tol).value;
}

}  // namespace cfmm
