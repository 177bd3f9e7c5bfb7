#include "cfmm/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <ostream>

#include "cfmm/axioms.hpp"
#include "cfmm/duality.hpp"
#include "cfmm/prediction.hpp"

namespace cfmm::cli {

namespace {

using io::Json;

void dump_number(std::string& out, double v) {
  if (std::isnan(v)) {
    out += "\"nan\"";
  } else if (std::isinf(v)) {
    out += v > 0 ? "\"inf\"" : "\"-inf\"";
  } else {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    out.append(buf, res.ptr);
  }
}

void dump_into(std::string& out, const Json& v) {
  switch (v.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, item] : v.items()) {
        if (!first) out += ',';
        first = false;
        out += Json(key).dump();
        out += ':';
        dump_into(out, item);
      }
      out += '}';
      break;
    }
    case Json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        dump_into(out, v[i]);
      }
      out += ']';
      break;
    }
    case Json::value_t::number_float:
      dump_number(out, v.get<double>());
      break;
    default:
      out += v.dump();
  }
}

Json numbers_json(const Vector& v) {
  Json arr = Json::array();
  for (double x : v) arr.push_back(x);
  return arr;
}

int exit_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::MaxIterExceeded:
    case ErrorCode::NotConverged:
      return kNotConverged;
    case ErrorCode::ParseError:
      return kUsageError;
    default:
      return kDomainError;
  }
}

void report_error(std::ostream& err, std::string_view code, const std::string& message) {
  err << dump(Json{{"error", code}, {"message", message}}) << '\n';
}

// Smallest value of the other coordinate that puts the point in the set.
double boundary_partner(const ReachableSet& set, std::size_t axis, double x, const Tolerance& tol) {
  Vector point(2, 0.0);
  point[axis] = x;
  auto inside = [&](double y) {
    point[1 - axis] = y;
    return set.contains(point);
  };
  if (inside(0.0)) return 0.0;
  Bracket b;
  try {
    b = expand_bracket(inside, 1.0, TrueSide::Above);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoBracketFound) throw;
    return std::numeric_limits<double>::infinity();
  }
  return bisect_boundary(inside, b, tol);
}

Json report_json(const AxiomReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks) {
    checks.push_back(Json{{"name", c.name}, {"probes", c.probes}, {"violations", c.violations}, {"worst", c.worst}});
  }
  return Json{{"subject", r.subject}, {"passed", r.passed()}, {"checks", checks}};
}

}  // namespace

std::string dump(const Json& value) {
  std::string out;
  dump_into(out, value);
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Constant function market maker toolkit"};
  app.require_subcommand(1);

  Tolerance tol;
  app.add_option("--rel", tol.rel, "Relative solver tolerance");
  app.add_option("--abs", tol.abs, "Absolute solver tolerance");
  app.add_option("--max-iter", tol.max_iter, "Iteration cap for solvers");

  std::string pool_arg, reserves_arg, prices_arg, shares_arg, instance_arg, ledger_arg;
  std::string direction, provider, range_arg, out_path;
  double gamma = 1.0, fraction = 0.0, band = 1e-10;
  std::size_t axis = 0, samples = 100;
  int probes = 200;
  std::uint64_t seed = AxiomOptions{}.seed;

  std::function<int()> action;
  auto pool_opt = [&](CLI::App* sub) { sub->add_option("--pool", pool_arg, "Pool spec (JSON file, @file or inline JSON)")->required(); };
  auto vec_opt = [&](CLI::App* sub, const char* name, std::string& target, const char* help) {
    return sub->add_option(name, target, help);
  };
  auto emit = [&](const Json& j) {
    out << dump(j) << '\n';
    return static_cast<int>(kOk);
  };

  auto* eval_phi = app.add_subcommand("eval-phi", "Canonical trading function at given reserves");
  pool_opt(eval_phi);
  vec_opt(eval_phi, "--reserves", reserves_arg, "Reserves, e.g. 1,4")->required();
  eval_phi->callback([&] {
    action = [&] {
      const SetPtr set = io::parse_pool(io::load_json_arg(pool_arg));
      return emit(Json{{"phi", phi(*set, io::parse_numbers(reserves_arg), tol)}});
    };
  });

  auto* eval_pv = app.add_subcommand("eval-pv", "Portfolio value at given prices");
  pool_opt(eval_pv);
  vec_opt(eval_pv, "--prices", prices_arg, "Prices, e.g. 4,1")->required();
  eval_pv->callback([&] {
    action = [&] {
      const SetPtr set = io::parse_pool(io::load_json_arg(pool_arg));
      const PortfolioValue pv = portfolio_value(*set, io::parse_numbers(prices_arg), tol);
      return emit(Json{{"value", pv.value},
                       {"minimizer", pv.minimizer.empty() ? Json(nullptr) : numbers_json(pv.minimizer)}});
    };
  });

  auto* dualize = app.add_subcommand("dualize", "Numerical transform between phi and V");
  pool_opt(dualize);
  dualize->add_option("--direction", direction, "pv-to-phi or phi-to-pv")
      ->required()
      ->check(CLI::IsMember({"pv-to-phi", "phi-to-pv"}));
  vec_opt(dualize, "--reserves", reserves_arg, "Reserves for pv-to-phi");
  vec_opt(dualize, "--prices", prices_arg, "Prices for phi-to-pv");
  dualize->callback([&] {
    action = [&] {
      const SetPtr set = io::parse_pool(io::load_json_arg(pool_arg));
      if (direction == "pv-to-phi") {
        if (reserves_arg.empty()) fail(ErrorCode::ParseError, "pv-to-phi needs --reserves");
        const Vector r = io::parse_numbers(reserves_arg);
        const double got = phi_from_pv(portfolio_value_fn(set, tol), r, tol);
        const double want = phi(*set, r, tol);
        return emit(Json{{"phi", got}, {"roundtrip_residual", std::abs(got - want) / std::abs(want)}});
      }
      if (prices_arg.empty()) fail(ErrorCode::ParseError, "phi-to-pv needs --prices");
      const Vector c = io::parse_numbers(prices_arg);
      const double got = pv_from_phi(trading_fn(set, tol), c, tol);
      const double want = portfolio_value(*set, c, tol).value;
      return emit(Json{{"value", got}, {"roundtrip_residual", std::abs(got - want) / std::abs(want)}});
    };
  });

  auto* cost = app.add_subcommand("cost", "Prediction-market cost C(q) implied by a pool");
  pool_opt(cost);
  vec_opt(cost, "--shares", shares_arg, "Outstanding shares q")->required();
  cost->callback([&] {
    action = [&] {
      const SetPtr set = io::parse_pool(io::load_json_arg(pool_arg));
      return emit(Json{{"cost", cost_from_set(*set, io::parse_numbers(shares_arg), tol)}});
    };
  });

  auto trade_opts = [&](CLI::App* sub) {
    pool_opt(sub);
    vec_opt(sub, "--reserves", reserves_arg, "Current reserves")->required();
    vec_opt(sub, "--prices", prices_arg, "External prices")->required();
    sub->add_option("--gamma", gamma, "Fee parameter in [0, 1]");
  };
  auto make_trading = [&] {
    return make_fee_pool(io::parse_pool(io::load_json_arg(pool_arg)), io::parse_numbers(reserves_arg), gamma);
  };

  auto* arb_cmd = app.add_subcommand("arb", "Optimal arbitrage against external prices");
  trade_opts(arb_cmd);
  arb_cmd->callback([&] {
    action = [&] {
      const ArbResult r = arb(*make_trading(), io::parse_numbers(prices_arg), tol);
      return emit(Json{{"profit", r.profit}, {"trade", numbers_json(r.trade)}});
    };
  });

  auto* no_trade = app.add_subcommand("no-trade", "Whether prices lie in the no-trade cone");
  trade_opts(no_trade);
  no_trade->add_option("--band", band, "Relative profit band counted as no arbitrage");
  no_trade->callback([&] {
    action = [&] {
      const TradingPtr t = make_trading();
      const Vector c = io::parse_numbers(prices_arg);
      return emit(Json{{"in_no_trade_cone", in_no_trade_cone(*t, c, band, tol)},
                       {"profit", arb(*t, c, tol).profit}});
    };
  });

  auto* route_cmd = app.add_subcommand("route", "Optimal routing through the dual problem");
  route_cmd->add_option("--instance", instance_arg, "Routing spec (JSON file, @file or inline JSON)")->required();
  route_cmd->callback([&] {
    action = [&] {
      const RoutingInstance inst = io::parse_routing(io::load_json_arg(instance_arg));
      const RoutingSolution s = route(inst, tol);
      Json trades = Json::array();
      for (const auto& d : s.trades) trades.push_back(numbers_json(d));
      emit(Json{{"converged", s.converged},
                {"verified", verify_optimality(inst, s, 1e-6, tol)},
                {"primal", s.primal},
                {"dual", s.dual},
                {"gap", s.gap},
                {"violation", s.violation},
                {"nu", numbers_json(s.nu)},
                {"net", numbers_json(s.net)},
                {"trades", trades}});
      return s.converged ? static_cast<int>(kOk) : static_cast<int>(kNotConverged);
    };
  });

  auto* lp_cmd = app.add_subcommand("lp", "Apply a liquidity event to a ledger file");
  lp_cmd->add_option("--ledger", ledger_arg, "Ledger (JSON file, @file or inline JSON)")->required();
  lp_cmd->add_option("--provider", provider, "Provider id")->required();
  lp_cmd->add_option("--fraction", fraction, "Fraction nu of current reserves")->required();
  lp_cmd->add_option("--direction", direction, "add or remove")->required()->check(CLI::IsMember({"add", "remove"}));
  lp_cmd->add_option("--out", out_path, "Also write the updated ledger here");
  lp_cmd->callback([&] {
    action = [&] {
      const LiquidityUpdate state = io::parse_ledger(io::load_json_arg(ledger_arg));
      const LiquidityEvent ev{provider, fraction,
                              direction == "add" ? LiquidityEvent::Direction::Add : LiquidityEvent::Direction::Remove};
      const LiquidityUpdate next = apply_liquidity(state.ledger, state.reserves, ev);
      const Json j = io::ledger_to_json(next);
      if (!out_path.empty()) {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) fail(ErrorCode::ParseError, "cannot write " + out_path);
        f << dump(j) << '\n';
      }
      return emit(j);
    };
  });

  auto* curve = app.add_subcommand("export-curve", "Boundary of a two-asset set as CSV");
  pool_opt(curve);
  curve->add_option("--axis", axis, "Swept asset, 0 or 1")->check(CLI::Range(0, 1));
  vec_opt(curve, "--range", range_arg, "lo,hi of the swept reserve")->required();
  curve->add_option("--samples", samples, "Number of points (>= 2)")->check(CLI::Range(2, 1000000));
  curve->callback([&] {
    action = [&] {
      const SetPtr set = io::parse_pool(io::load_json_arg(pool_arg));
      require_dim(2, set->dim(), "export-curve");
      const Vector range = io::parse_numbers(range_arg);
      if (range.size() != 2 || !(range[0] >= 0.0) || !(range[1] > range[0])) {
        fail(ErrorCode::ParseError, "--range must be lo,hi with 0 <= lo < hi");
      }
      std::string csv = axis == 0 ? "r1,r2_boundary\n" : "r2,r1_boundary\n";
      for (std::size_t k = 0; k < samples; ++k) {
        const double x = k + 1 == samples ? range[1]
                                          : range[0] + (range[1] - range[0]) * static_cast<double>(k) /
                                                           static_cast<double>(samples - 1);
        dump_number(csv, x);
        csv += ',';
        const double y = boundary_partner(*set, axis, x, tol);
        if (std::isinf(y)) {
          csv += "inf";
        } else {
          dump_number(csv, y);
        }
        csv += '\n';
      }
      out << csv;
      return static_cast<int>(kOk);
    };
  });

  auto* check = app.add_subcommand("check", "Run the axiom and property suite on a pool");
  pool_opt(check);
  check->add_option("--probes", probes, "Random probes per property")->check(CLI::Range(1, 1000000));
  check->add_option("--seed", seed, "Sampler seed");
  vec_opt(check, "--reserves", reserves_arg, "Also check the trading set at these reserves");
  check->add_option("--gamma", gamma, "Fee parameter for the trading-set check");
  check->callback([&] {
    action = [&] {
      const SetPtr set = io::parse_pool(io::load_json_arg(pool_arg));
      AxiomOptions opts;
      opts.probes = probes;
      opts.seed = seed;
      const AxiomReport r = check_reachable_set(*set, opts);
      Json j = report_json(r);
      bool ok = r.passed();
      if (!reserves_arg.empty()) {
        const AxiomReport t = check_trading_set(*make_fee_pool(set, io::parse_numbers(reserves_arg), gamma), opts);
        j["trading_set"] = report_json(t);
        ok = ok && t.passed();
        j["passed"] = ok;
      }
      emit(j);
      return ok ? static_cast<int>(kOk) : static_cast<int>(kDomainError);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, "UsageError", e.what());
    return kUsageError;
  }

  try {
    tol.validate();
    return action();
  } catch (const Error& e) {
    report_error(err, to_string(e.code()), e.what());
    return exit_for(e.code());
  } catch (const std::exception& e) {
    report_error(err, "InternalError", e.what());
    return kDomainError;
  }
}

}  // namespace cfmm::cli
