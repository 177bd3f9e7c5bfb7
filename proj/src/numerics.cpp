#include "cfmm/numerics.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <string>

namespace cfmm {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::InvalidSet: return "InvalidSet";
    case ErrorCode::NonBracketing: return "NonBracketing";
    case ErrorCode::NoBracketFound: return "NoBracketFound";
    case ErrorCode::MaxIterExceeded: return "MaxIterExceeded";
    case ErrorCode::ZeroLiquidity: return "ZeroLiquidity";
    case ErrorCode::NonSmoothPoint: return "NonSmoothPoint";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::InvalidScale: return "InvalidScale";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::NotInSet: return "NotInSet";
    case ErrorCode::InfeasibleFirstTrade: return "InfeasibleFirstTrade";
    case ErrorCode::RemoveExceedsShare: return "RemoveExceedsShare";
    case ErrorCode::NonPositiveFraction: return "NonPositiveFraction";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

void Tolerance::validate() const {
  if (!(rel > 0.0) || !(abs > 0.0) || max_iter < 1) {
    fail(ErrorCode::InvalidParameter, "Tolerance: need rel > 0, abs > 0, max_iter >= 1");
  }
}

namespace {

// Shared driver: coordinate descent over log-coordinates u. `eval` maps the
// full u vector to an objective value. Coordinate i is searched on [lo[i], hi[i]];
// coordinates with lo[i] == hi[i] stay fixed.
template <class Eval>
VectorMin coordinate_descent_log(Eval&& eval, Vector u, const Vector& lo, const Vector& hi,
                                 const Tolerance& tol,
                                 double stop_below = -std::numeric_limits<double>::infinity()) {
  std::size_t free = 0;
  for (std::size_t i = 0; i < u.size(); ++i) free += lo[i] < hi[i] ? 1 : 0;
  const Tolerance line{tol.rel, tol.abs, std::max(tol.max_iter, 200)};
  double current = eval(u);
  for (int sweep = 0;; ++sweep) {
    if (sweep >= tol.max_iter) {
      fail(ErrorCode::MaxIterExceeded, "coordinate descent: no convergence after " +
                                           std::to_string(tol.max_iter) + " sweeps");
    }
    const double before = current;
    const Vector start = u;
    for (std::size_t i = 0; i < u.size(); ++i) {
      if (!(lo[i] < hi[i])) continue;
      const double saved = u[i];
      auto along = [&](double t) {
        u[i] = t;
        return eval(u);
      };
      ScalarMin m = minimize_scalar_convex(along, Bracket{lo[i], hi[i]}, line);
      if (m.min <= current) {
        u[i] = m.argmin;
        current = m.min;
      } else {
        u[i] = saved;
      }
      if (current < stop_below) return VectorMin{std::move(u), current};
    }
    // A single free coordinate is solved exactly by one line search.
    if (free <= 1) break;
    // Pattern move along the sweep's displacement, for ridges that cyclic
    // coordinate steps only creep along.
    if (current < before) {
      double reach = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < u.size(); ++i) {
        const double d = u[i] - start[i];
        if (d > 0.0) reach = std::min(reach, (hi[i] - u[i]) / d);
        if (d < 0.0) reach = std::min(reach, (lo[i] - u[i]) / d);
      }
      if (reach > 0.0 && std::isfinite(reach)) {
        const Vector base = u;
        auto along = [&](double t) {
          for (std::size_t i = 0; i < u.size(); ++i) u[i] = base[i] + t * (base[i] - start[i]);
          return eval(u);
        };
        const ScalarMin m = minimize_scalar_convex(along, Bracket{0.0, reach}, line);
        if (m.min < current) {
          along(m.argmin);
          current = m.min;
        } else {
          u = base;
        }
        if (current < stop_below) return VectorMin{std::move(u), current};
      }
    }
    if (before - current <= tol.rel * std::abs(current) + tol.abs) break;
  }
  return VectorMin{std::move(u), current};
}

}  // namespace

VectorMin minimize_positive_orthant(const VectorFunction& g, std::size_t dim, const Tolerance& tol,
                                    OrthantBox box) {
  tol.validate();
  if (dim == 0) fail(ErrorCode::InvalidParameter, "minimize_positive_orthant: dim must be >= 1");
  if (!(box.min > 0.0) || !(box.max > box.min)) {
    fail(ErrorCode::InvalidParameter, "minimize_positive_orthant: invalid box");
  }
  Vector x(dim, 1.0);
  auto eval = [&](const Vector& u) {
    for (std::size_t i = 0; i < dim; ++i) x[i] = std::exp(u[i]);
    return g(x);
  };
  VectorMin res = coordinate_descent_log(eval, Vector(dim, 0.0), Vector(dim, std::log(box.min)),
                                         Vector(dim, std::log(box.max)), tol);
  for (double& v : res.argmin) v = std::exp(v);
  return res;
}

VectorMin minimize_on_simplex(const VectorFunction& g, std::size_t dim, const Tolerance& tol,
                              double floor, double stop_below) {
  tol.validate();
  if (dim == 0) fail(ErrorCode::InvalidParameter, "minimize_on_simplex: dim must be >= 1");
  if (!(floor > 0.0) || !(floor < 1.0 / static_cast<double>(dim))) {
    fail(ErrorCode::InvalidParameter, "minimize_on_simplex: floor out of range");
  }
  Vector c(dim, 1.0 / static_cast<double>(dim));
  if (dim == 1) {
    c[0] = 1.0;
    return VectorMin{c, g(c)};
  }
  // The last log-coordinate is pinned at 0; the others move freely.
  auto to_simplex = [&](const Vector& u) {
    double sum = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      c[i] = i + 1 == dim ? 1.0 : std::exp(u[i]);
      sum += c[i];
    }
    for (double& v : c) v /= sum;
  };
  auto eval = [&](const Vector& u) {
    to_simplex(u);
    return g(c);
  };
  const double span = -std::log(floor);
  Vector lo(dim, -span);
  Vector hi(dim, span);
  lo.back() = hi.back() = 0.0;
  VectorMin res = coordinate_descent_log(eval, Vector(dim, 0.0), lo, hi, tol, stop_below);
  to_simplex(res.argmin);
  res.argmin = c;
  return res;
}

VectorMin minimize_log_box(const VectorFunction& g, std::span<const double> lo,
                           std::span<const double> hi, std::span<const double> start,
                           const Tolerance& tol) {
  tol.validate();
  const std::size_t dim = lo.size();
  require_dim(dim, hi.size(), "minimize_log_box");
  require_dim(dim, start.size(), "minimize_log_box");
  if (dim == 0) fail(ErrorCode::InvalidParameter, "minimize_log_box: dim must be >= 1");
  Vector ulo(dim), uhi(dim), u(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    if (!(lo[i] > 0.0) || !(hi[i] >= lo[i]) || !std::isfinite(hi[i])) {
      fail(ErrorCode::InvalidParameter, "minimize_log_box: need 0 < lo <= hi < inf");
    }
    ulo[i] = std::log(lo[i]);
    uhi[i] = std::log(hi[i]);
    u[i] = std::clamp(std::log(start[i] > 0.0 ? start[i] : lo[i]), ulo[i], uhi[i]);
  }
  Vector x(dim);
  auto eval = [&](const Vector& v) {
    for (std::size_t i = 0; i < dim; ++i) {
      // Pinned coordinates keep their exact bound rather than exp(log(bound)).
      x[i] = v[i] == ulo[i] ? lo[i] : v[i] == uhi[i] ? hi[i] : std::exp(v[i]);
    }
    return g(x);
  };
  VectorMin res = coordinate_descent_log(eval, std::move(u), ulo, uhi, tol);
  eval(res.argmin);
  res.argmin = x;
  return res;
}

}  // namespace cfmm
