#include "cfmm/pools.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace cfmm {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) fail(ErrorCode::InvalidParameter, std::string(what) + " must be finite");
}

}  // namespace

// ---------------------------------------------------------------- UniswapV2

UniswapV2::UniswapV2(double k) : PsiSet(2), k_(k) {
  require_finite(k, "uniswap_v2 k");
  if (!(k > 0.0)) fail(ErrorCode::InvalidParameter, "uniswap_v2 requires k > 0");
  reject_zero_member();
}

std::optional<double> UniswapV2::phi_closed(std::span<const double> r) const {
  return std::sqrt(r[0] * r[1] / k_);
}

std::optional<Vector> UniswapV2::grad_phi_closed(std::span<const double> r) const {
  const double denom = 2.0 * std::sqrt(k_ * r[0] * r[1]);
  if (!(denom > 0.0)) return std::nullopt;
  return Vector{r[1] / denom, r[0] / denom};
}

std::optional<PortfolioValue> UniswapV2::pv_closed(std::span<const double> c,
                                                   const Tolerance&) const {
  PortfolioValue out;
  out.value = 2.0 * std::sqrt(k_ * c[0] * c[1]);
  if (c[0] > 0.0 && c[1] > 0.0) {
    out.minimizer = {std::sqrt(k_ * c[1] / c[0]), std::sqrt(k_ * c[0] / c[1])};
  }
  return out;
}

std::string UniswapV2::describe() const { return "uniswap_v2(k=" + fmt(k_) + ")"; }

// ------------------------------------------------------------ UniswapV3Tick

UniswapV3Tick::UniswapV3Tick(double alpha, double beta, double k)
    : PsiSet(2), alpha_(alpha), beta_(beta), k_(k) {
  require_finite(alpha, "uniswap_v3_tick alpha");
  require_finite(beta, "uniswap_v3_tick beta");
  require_finite(k, "uniswap_v3_tick k");
  if (!(alpha >= 0.0) || !(beta >= 0.0)) {
    fail(ErrorCode::InvalidParameter, "uniswap_v3_tick requires alpha, beta >= 0");
  }
  if (!(k > alpha * beta)) fail(ErrorCode::InvalidParameter, "uniswap_v3_tick requires k > alpha*beta");
  reject_zero_member();
}

std::optional<double> UniswapV3Tick::phi_closed(std::span<const double> r) const {
  const double d = k_ - alpha_ * beta_;
  const double a = beta_ * r[0] + alpha_ * r[1];
  const double s = std::sqrt(a * a + 4.0 * d * r[0] * r[1]);
  return 0.5 * (a + s) / d;
}

std::optional<Vector> UniswapV3Tick::grad_phi_closed(std::span<const double> r) const {
  const double d = k_ - alpha_ * beta_;
  const double a = beta_ * r[0] + alpha_ * r[1];
  const double s = std::sqrt(a * a + 4.0 * d * r[0] * r[1]);
  if (!(s > 0.0)) return std::nullopt;
  return Vector{0.5 * (beta_ + (a * beta_ + 2.0 * d * r[1]) / s) / d,
                0.5 * (alpha_ + (a * alpha_ + 2.0 * d * r[0]) / s) / d};
}

// With p = c1/c2 the minimum of p R1 + R2 over the tick sits on the R2 = 0
// face for p < beta^2/k, on the R1 = 0 face for p > k/alpha^2 and at the
// stationary point of the hyperbola in between. Branch tests are written
// without dividing by c2 so tiny numeraire prices cannot overflow.
std::optional<PortfolioValue> UniswapV3Tick::pv_closed(std::span<const double> c,
                                                       const Tolerance&) const {
  const double c1 = c[0];
  const double c2 = c[1];
  PortfolioValue out;
  if (beta_ > 0.0 && c1 * k_ < beta_ * beta_ * c2) {
    const double r1 = k_ / beta_ - alpha_;
    out.value = c1 * r1;
    out.minimizer = {r1, 0.0};
  } else if (alpha_ > 0.0 && c1 * alpha_ * alpha_ > k_ * c2) {
    const double r2 = k_ / alpha_ - beta_;
    out.value = c2 * r2;
    out.minimizer = {0.0, r2};
  } else {
    out.value = 2.0 * std::sqrt(k_ * c1 * c2) - alpha_ * c1 - beta_ * c2;
    if (c1 > 0.0 && c2 > 0.0) {
      out.minimizer = {std::sqrt(k_ * c2 / c1) - alpha_, std::sqrt(k_ * c1 / c2) - beta_};
    }
  }
  return out;
}

std::string UniswapV3Tick::describe() const {
  return "uniswap_v3_tick(alpha=" + fmt(alpha_) + ", beta=" + fmt(beta_) + ", k=" + fmt(k_) + ")";
}

// ------------------------------------------------------------ CurveTwoAsset

CurveTwoAsset::CurveTwoAsset(double alpha, double k) : PsiSet(2), alpha_(alpha), k_(k) {
  require_finite(alpha, "curve2 alpha");
  require_finite(k, "curve2 k");
  if (!(alpha > 0.0)) fail(ErrorCode::InvalidParameter, "curve2 requires alpha > 0");
  reject_zero_member();
}

double CurveTwoAsset::psi_value(std::span<const double> r) const {
  const double p = r[0] * r[1];
  if (!(p > 0.0)) return -std::numeric_limits<double>::infinity();
  return r[0] + r[1] - alpha_ / p;
}

std::optional<double> curve_cubic_radical(double alpha, double k, double r1, double r2) {
  const double p = r1 * r2;
  const double s = r1 + r2;
  const double c1 = 27.0 * alpha * alpha * p * s;
  const double c2 = 108.0 * alpha * alpha * alpha * k * k * k * p * p * p + c1 * c1;
  if (!(c2 >= 0.0)) return std::nullopt;
  const double w = std::cbrt(c1 + std::sqrt(c2));
  if (!(w > 0.0)) return std::nullopt;
  const double cbrt2 = std::cbrt(2.0);
  const double lambda = w / (3.0 * cbrt2 * alpha) - cbrt2 * k * p / w;
  if (!(lambda > 0.0) || !std::isfinite(lambda)) return std::nullopt;
  const double residual = -alpha * lambda * lambda * lambda - k * p * lambda + p * s;
  const double scale = p * s + alpha * lambda * lambda * lambda + std::abs(k * p * lambda);
  if (std::abs(residual) > 1e-9 * scale) return std::nullopt;
  return lambda;
}

// Solving psi(R / l) = k for l gives the cubic -alpha l^3 - k P l + P S = 0
// whose largest positive root is phi(R) itself; the set {l : cubic >= 0} is
// [0, root] because the cubic is concave on l > 0 and positive at 0.
std::optional<double> CurveTwoAsset::phi_closed(std::span<const double> r) const {
  const double p = r[0] * r[1];
  if (!(p > 0.0)) return 0.0;
  const double s = r[0] + r[1];
  auto cubic = [&](double l) { return -alpha_ * l * l * l - k_ * p * l + p * s; };

  double lambda = 0.0;
  if (auto radical = curve_cubic_radical(alpha_, k_, r[0], r[1])) {
    lambda = *radical;
    // One Newton step takes the verified radical root to full precision.
    const double slope = -3.0 * alpha_ * lambda * lambda - k_ * p;
    if (slope < 0.0) {
      const double next = lambda - cubic(lambda) / slope;
      if (next > 0.0 && std::abs(cubic(next)) <= std::abs(cubic(lambda))) lambda = next;
    }
  } else {
    const double seed = std::max(r[0], r[1]);
    const Bracket b = expand_bracket([&](double l) { return cubic(l) >= 0.0; }, seed);
    lambda = bisect_boundary([&](double l) { return cubic(l) >= 0.0; }, b, Tolerance::tight());
  }
  return lambda;
}

std::optional<Vector> CurveTwoAsset::grad_phi_closed(std::span<const double> r) const {
  const double p = r[0] * r[1];
  if (!(p > 0.0)) return std::nullopt;
  const double l = *phi_closed(r);
  // Implicit differentiation of F(l, R) = -alpha l^3 - k R1 R2 l + R1 R2 (R1 + R2) = 0.
  const double f_l = 3.0 * alpha_ * l * l + k_ * p;
  if (!(f_l > 0.0)) return std::nullopt;
  const double f_r1 = r[1] * (2.0 * r[0] + r[1] - k_ * l);
  const double f_r2 = r[0] * (r[0] + 2.0 * r[1] - k_ * l);
  return Vector{f_r1 / f_l, f_r2 / f_l};
}

std::string CurveTwoAsset::describe() const {
  return "curve2(alpha=" + fmt(alpha_) + ", k=" + fmt(k_) + ")";
}

// ------------------------------------------------------------------ LMSRSet

LMSRSet::LMSRSet(double b, std::size_t n) : PsiSet(n), b_(b) {
  require_finite(b, "lmsr b");
  if (!(b > 0.0)) fail(ErrorCode::InvalidParameter, "lmsr requires b > 0");
  if (n < 2) fail(ErrorCode::InvalidParameter, "lmsr requires n >= 2");
  reject_zero_member();
}

double LMSRSet::psi_value(std::span<const double> r) const {
  double sum = 0.0;
  for (double x : r) sum += std::exp(-x / b_);
  return -sum;
}

std::string LMSRSet::describe() const {
  return "lmsr(b=" + fmt(b_) + ", n=" + std::to_string(dim()) + ")";
}

// ---------------------------------------------------------------- factories

std::shared_ptr<const UniswapV2> make_uniswap_v2(double k) { return std::make_shared<UniswapV2>(k); }

std::shared_ptr<const UniswapV3Tick> make_uniswap_v3_tick(double alpha, double beta, double k) {
  return std::make_shared<UniswapV3Tick>(alpha, beta, k);
}

std::shared_ptr<const CurveTwoAsset> make_curve(double alpha, double k) {
  return std::make_shared<CurveTwoAsset>(alpha, k);
}

std::shared_ptr<const LMSRSet> make_lmsr(double b, std::size_t n) {
  return std::make_shared<LMSRSet>(b, n);
}

// ------------------------------------------------------------ free functions

double pool_phi_closed(const ReachableSet& pool, std::span<const double> reserves) {
  require_dim(pool.dim(), reserves.size(), "pool_phi_closed");
  require_nonnegative(reserves, "pool_phi_closed");
  if (auto v = pool.phi_closed(reserves)) return *v;
  return phi_bisection(pool, reserves, Tolerance::tight());
}

double pool_pv_closed(const ReachableSet& pool, std::span<const double> prices) {
  require_dim(pool.dim(), prices.size(), "pool_pv_closed");
  require_prices(prices, "pool_pv_closed");
  const bool closed = dynamic_cast<const UniswapV2*>(&pool) != nullptr ||
                      dynamic_cast<const UniswapV3Tick*>(&pool) != nullptr;
  if (!closed) fail(ErrorCode::Unsupported, "pool_pv_closed: no closed form for " + pool.describe());
  return pool.pv_closed(prices, Tolerance{})->value;
}

Vector pool_grad_phi(const ReachableSet& pool, std::span<const double> reserves) {
  require_dim(pool.dim(), reserves.size(), "pool_grad_phi");
  for (double r : reserves) {
    if (!(r > 0.0)) fail(ErrorCode::InvalidParameter, "pool_grad_phi: reserves must be > 0");
  }
  if (auto g = pool.grad_phi_closed(reserves)) return *g;
  fail(ErrorCode::Unsupported, "pool_grad_phi: no closed gradient for " + pool.describe());
}

}  // namespace cfmm
