#include "cfmm/axioms.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace cfmm {

namespace {

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  Vector box(std::size_t n, double lo, double hi) {
    Vector v(n);
    for (double& x : v) x = uniform(lo, hi);
    return v;
  }

 private:
  std::mt19937_64 rng_;
};

// Records a probe; `excess` > 0 means the axiom failed by that much.
void record(AxiomCheck& c, double excess) {
  ++c.probes;
  if (excess > 0.0 || std::isnan(excess)) {
    ++c.violations;
    c.worst = std::isnan(excess) ? excess : std::max(c.worst, excess);
  }
}

Vector scaled(const Vector& v, double t) {
  Vector out(v);
  for (double& x : out) x *= t;
  return out;
}

Vector midpoint(const Vector& a, const Vector& b) {
  Vector out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = 0.5 * (a[i] + b[i]);
  return out;
}

}  // namespace

bool AxiomReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.violations == 0; });
}

AxiomReport check_reachable_set(const ReachableSet& set, const AxiomOptions& opts) {
  const std::size_t n = set.dim();
  const Tolerance tight = Tolerance::tight();
  Sampler rng(opts.seed);
  auto phi_of = [&](const Vector& r) { return phi(set, r, tight); };

  AxiomCheck zero{"zero_excluded"}, homog{"phi_homogeneity"}, concave{"phi_midpoint_concavity"},
      mono{"phi_monotonicity"}, recovery{"set_recovery"}, positive{"positive_reachability"},
      upward{"upward_closure"}, convex{"set_convexity"}, pv_homog{"pv_homogeneity"},
      pv_mono{"pv_monotonicity"};

  record(zero, set.contains(Vector(n, 0.0)) ? 1.0 : 0.0);

  for (int k = 0; k < opts.probes; ++k) {
    const Vector r = rng.box(n, opts.lo, opts.hi);
    const Vector r2 = rng.box(n, opts.lo, opts.hi);
    const double p = phi_of(r);
    const double p2 = phi_of(r2);

    record(positive, p > 0.0 ? 0.0 : 1.0);

    const double t = rng.uniform(0.1, 10.0);
    const double pt = phi_of(scaled(r, t));
    record(homog, std::abs(pt - t * p) - 1e-8 * t * p);

    record(concave, 0.5 * (p + p2) - phi_of(midpoint(r, r2)) - 1e-9);

    Vector up(r);
    for (double& x : up) x += rng.uniform(0.0, 1.0);
    record(mono, p - phi_of(up) - 1e-12);

    const bool in = set.contains(r);
    record(recovery, in ? (1.0 - 1e-9) - p : p - (1.0 + 1e-9));

    // Boundary points: upward closure and convexity of the set itself.
    const Vector b = scaled(r, 1.0 / p);
    const Vector b2 = scaled(r2, 1.0 / p2);
    Vector above(b);
    for (double& x : above) x = x * (1.0 + 1e-9) + rng.uniform(0.0, 1.0);
    record(upward, set.contains(above) ? 0.0 : 1.0);
    record(convex, set.contains(scaled(midpoint(b, b2), 1.0 + 1e-9)) ? 0.0 : 1.0);

    if (opts.include_pv && k < std::max(1, opts.probes / 10)) {
      const Vector c = rng.box(n, 0.1, 1.0);
      const double v = portfolio_value(set, c).value;
      const double s = rng.uniform(0.5, 2.0);
      const double vs = portfolio_value(set, scaled(c, s)).value;
      record(pv_homog, std::abs(vs - s * v) - 1e-8 * s * std::abs(v));
      Vector cu(c);
      for (double& x : cu) x += rng.uniform(0.0, 0.5);
      record(pv_mono, v - portfolio_value(set, cu).value - 1e-8 * std::abs(v));
    }
  }

  AxiomReport report{set.describe(), {zero, homog, concave, mono, recovery, positive, upward, convex}};
  if (opts.include_pv) {
    report.checks.push_back(pv_homog);
    report.checks.push_back(pv_mono);
  }
  return report;
}

AxiomReport check_trading_set(const TradingSet& set, const AxiomOptions& opts) {
  if (set.dim() != 2) fail(ErrorCode::Unsupported, "check_trading_set: two-asset sets only");
  if (set.reserves().empty()) fail(ErrorCode::Unsupported, "check_trading_set: set has no reserves");
  Sampler rng(opts.seed);
  const Vector& r = set.reserves();

  AxiomCheck zero{"zero_trade"}, down{"downward_closure"}, convex{"trade_convexity"},
      homog{"trade_phi_homogeneity"}, phi_convex{"trade_phi_convexity"}, recovery{"membership_recovery"};

  record(zero, set.feasible(Vector(2, 0.0)) ? 0.0 : 1.0);

  // A boundary trade: tender a random amount of one asset, receive the most of the other.
  auto boundary_trade = [&]() {
    const std::size_t recv = rng.uniform(0.0, 1.0) < 0.5 ? 0 : 1;
    const std::size_t tend = 1 - recv;
    Vector tender(2, 0.0);
    tender[tend] = rng.uniform(0.01, 2.0) * std::max(r[tend], 1e-3);
    Vector d(2, 0.0);
    d[tend] = -tender[tend];
    d[recv] = max_receivable(set, recv, tender);
    return d;
  };

  for (int k = 0; k < opts.probes; ++k) {
    const Vector d1 = boundary_trade();
    const Vector d2 = boundary_trade();

    Vector lower(d1);
    for (double& x : lower) x -= rng.uniform(0.0, 1.0);
    record(down, set.feasible(lower) ? 0.0 : 1.0);

    // Shrink slightly so rounding on the boundary does not count.
    record(convex, set.feasible(scaled(midpoint(d1, d2), 1.0 - 1e-9)) ? 0.0 : 1.0);

    const Vector inner = scaled(d1, rng.uniform(0.1, 1.5));
    const double p = trade_phi(set, inner);
    const double t = rng.uniform(0.5, 2.0);
    if (std::isfinite(p)) record(homog, std::abs(trade_phi(set, scaled(inner, t)) - t * p) - 1e-8 * t * p);

    const double q1 = trade_phi(set, d1);
    const double q2 = trade_phi(set, d2);
    record(phi_convex, trade_phi(set, midpoint(d1, d2)) - 0.5 * (q1 + q2) - 1e-9);

    const bool ok = set.feasible(inner);
    record(recovery, ok ? p - (1.0 + 1e-9) : (1.0 - 1e-9) - p);
  }
  return AxiomReport{set.describe(), {zero, down, convex, homog, phi_convex, recovery}};
}

}  // namespace cfmm
