#pragma once

// JSON descriptions of pools, routing instances and share ledgers.
//
// Pool specs:
//   {"type": "uniswap_v2", "k": 1}
//   {"type": "uniswap_v3_tick", "alpha": 1, "beta": 1, "k": 4}
//   {"type": "curve2", "alpha": 1, "k": 3}
//   {"type": "lmsr", "b": 1, "n": 2}
//   {"type": "scaled", "alpha": 2, "children": [<pool>]}
//   {"type": "sum" | "intersection", "children": [<pool>, ...]}
//   {"type": "asset_image", "n": 3, "mapping": [0, 2], "children": [<pool>]}

#include <string>
#include <string_view>

#include <json.hpp>

#include "cfmm/lp.hpp"
#include "cfmm/routing.hpp"

namespace cfmm::io {

using Json = nlohmann::json;

/// Parses JSON text, raising ParseError on malformed input.
Json parse_json(std::string_view text);

/// Reads a file, raising ParseError if it cannot be opened.
std::string read_file(const std::string& path);

/// Inline JSON (starting with '{') or a path, optionally prefixed with '@'.
Json load_json_arg(const std::string& arg);

SetPtr parse_pool(const Json& spec);

/// Comma- or whitespace-separated numbers, or "@path" to read them from a file.
/// Parsing is locale independent; "inf" and "-inf" are accepted.
Vector parse_numbers(const std::string& arg);

/// RoutingSpec: {"assets": [...], "pools": [{"pool": <pool>, "reserves": [...],
/// "gamma": g, "assets": [...]}], "utility": {"type": "arbitrage"|"linear", "prices": [...]}}.
/// The pool fields may also appear inline in the entry instead of under "pool".
RoutingInstance parse_routing(const Json& spec);

/// {"weights": {"id": w, ...}, "reserves": [...]}.
LiquidityUpdate parse_ledger(const Json& spec);
Json ledger_to_json(const LiquidityUpdate& state);

}  // namespace cfmm::io
