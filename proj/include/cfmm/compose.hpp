#pragma once

// Composition of reachable sets: nonnegative scaling, Minkowski sums,
// intersections and asset-selection images, plus aggregate CFMMs built from
// them. Trees are evaluated lazily; nothing is flattened.
//
// Portfolio values compose as a homomorphism (alpha V, V + V', V o A^T), so
// Minkowski-sum membership is decided through the dual test
//   R in S_1 + ... + S_m  <=>  min_c c^T R - sum_i V_i(c) >= 0
// instead of a search over decompositions of R.

#include <cstddef>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include "cfmm/reachable.hpp"

namespace cfmm {

/// Maps the n_i local assets of a pool onto distinct indices of an n-asset universe.
struct AssetMapping {
  std::vector<std::size_t> local_to_global;
  std::size_t global_dim = 0;

  /// Throws IndexOutOfRange for repeated or out-of-range indices.
  void validate() const;
  static AssetMapping identity(std::size_t n);

  /// c restricted to the mapped assets (A^T c).
  Vector restrict(std::span<const double> global) const;
  /// Local vector placed into the universe with zeros elsewhere (A x).
  Vector embed(std::span<const double> local) const;
};

class ComposedSet : public ReachableSet {
 public:
  enum class Kind { Scaled, Sum, Intersection, AssetImage };

  Kind kind() const noexcept { return kind_; }
  const std::vector<SetPtr>& children() const noexcept { return children_; }

 protected:
  ComposedSet(Kind kind, std::size_t dim, std::vector<SetPtr> children);

 private:
  Kind kind_;
  std::vector<SetPtr> children_;
};

using ComposedPtr = std::shared_ptr<const ComposedSet>;

/// alpha S. Raises InvalidScale unless alpha > 0.
ComposedPtr scale_set(double alpha, SetPtr set);

/// Minkowski sum; membership via the summed portfolio value.
ComposedPtr sum_sets(std::vector<SetPtr> sets, const Tolerance& tol = {});

ComposedPtr intersect_sets(std::vector<SetPtr> sets);

/// A S + R_+^n for an asset-selection matrix A.
ComposedPtr asset_image(AssetMapping mapping, SetPtr set);

/// sum_i A_i S_i. A single child is returned as its image.
ComposedPtr aggregate(std::vector<std::pair<SetPtr, AssetMapping>> children,
                      const Tolerance& tol = {});

/// Portfolio value of a composition: alpha V for scalings, sum of V_i for sums,
/// V(A^T c) for images; intersections fall back to the generic transform.
double composed_pv(const ReachableSet& set, std::span<const double> prices,
                   const Tolerance& tol = {});

}  // namespace cfmm
