#pragma once

// Randomized property suites for reachable and trading sets. Each check
// samples probes from a seeded generator and counts violations of one axiom.

#include <cstdint>
#include <string>
#include <vector>

#include "cfmm/reachable.hpp"
#include "cfmm/trade.hpp"

namespace cfmm {

struct AxiomCheck {
  std::string name;
  int probes = 0;
  int violations = 0;
  double worst = 0.0;  ///< largest excess over the check's tolerance seen
};

struct AxiomReport {
  std::string subject;
  std::vector<AxiomCheck> checks;

  bool passed() const;
};

struct AxiomOptions {
  int probes = 200;
  std::uint64_t seed = 20240611;
  double lo = 0.1;  ///< reserves are drawn from [lo, hi]^n
  double hi = 10.0;
  bool include_pv = true;
};

/// Nonemptiness and 0 excluded, phi homogeneity (1e-8 rel), midpoint concavity
/// (1e-9), monotonicity (1e-12), set recovery, positive reachability, upward
/// closure and convexity of boundary samples, and PV homogeneity/monotonicity.
AxiomReport check_reachable_set(const ReachableSet& set, const AxiomOptions& opts = {});

/// 0 in T, downward closure, convexity of boundary trades, and trade_phi
/// homogeneity, convexity and membership recovery. Two-asset sets only.
AxiomReport check_trading_set(const TradingSet& set, const AxiomOptions& opts = {});

}  // namespace cfmm
