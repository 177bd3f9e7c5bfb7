#include "cfmm/spec_io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "cfmm/compose.hpp"
#include "cfmm/pools.hpp"

namespace cfmm::io {

namespace {

[[noreturn]] void bad(const std::string& what) { fail(ErrorCode::ParseError, what); }

double number(const Json& obj, const char* key) {
  if (!obj.contains(key) || !obj.at(key).is_number()) bad(std::string("missing numeric field \"") + key + "\"");
  return obj.at(key).get<double>();
}

Vector numbers(const Json& arr, const char* what) {
  if (!arr.is_array()) bad(std::string(what) + " must be an array of numbers");
  Vector out;
  for (const auto& x : arr) {
    if (!x.is_number()) bad(std::string(what) + " must contain only numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<SetPtr> children(const Json& spec) {
  if (!spec.contains("children") || !spec.at("children").is_array()) bad("composite pool needs \"children\"");
  std::vector<SetPtr> out;
  for (const auto& c : spec.at("children")) out.push_back(parse_pool(c));
  return out;
}

SetPtr only_child(const Json& spec) {
  auto c = children(spec);
  if (c.size() != 1) bad("this pool type takes exactly one child");
  return c.front();
}

std::size_t index_of(const std::map<std::string, std::size_t>& names, const Json& name) {
  if (!name.is_string()) bad("asset names must be strings");
  auto it = names.find(name.get<std::string>());
  if (it == names.end()) bad("unknown asset \"" + name.get<std::string>() + "\"");
  return it->second;
}

}  // namespace

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) bad("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json load_json_arg(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && arg[first] == '{') return parse_json(arg);
  return parse_json(read_file(!arg.empty() && arg[0] == '@' ? arg.substr(1) : arg));
}

SetPtr parse_pool(const Json& spec) {
  if (!spec.is_object() || !spec.contains("type") || !spec.at("type").is_string()) {
    bad("pool spec must be an object with a string \"type\"");
  }
  const std::string type = spec.at("type").get<std::string>();
  if (type == "uniswap_v2") return make_uniswap_v2(number(spec, "k"));
  if (type == "uniswap_v3_tick") {
    return make_uniswap_v3_tick(number(spec, "alpha"), number(spec, "beta"), number(spec, "k"));
  }
  if (type == "curve2") return make_curve(number(spec, "alpha"), number(spec, "k"));
  if (type == "lmsr") {
    const double n = number(spec, "n");
    if (!(n >= 1.0) || n != static_cast<double>(static_cast<std::size_t>(n))) bad("lmsr \"n\" must be a positive integer");
    return make_lmsr(number(spec, "b"), static_cast<std::size_t>(n));
  }
  if (type == "scaled") return scale_set(number(spec, "alpha"), only_child(spec));
  if (type == "sum") return sum_sets(children(spec));
  if (type == "intersection") return intersect_sets(children(spec));
  if (type == "asset_image") {
    AssetMapping m;
    const double n = number(spec, "n");
    if (!(n >= 1.0)) bad("asset_image \"n\" must be >= 1");
    m.global_dim = static_cast<std::size_t>(n);
    if (!spec.contains("mapping")) bad("asset_image needs \"mapping\"");
    for (const auto& x : spec.at("mapping")) {
      if (!x.is_number_unsigned()) bad("asset_image mapping entries must be nonnegative integers");
      m.local_to_global.push_back(x.get<std::size_t>());
    }
    return asset_image(std::move(m), only_child(spec));
  }
  bad("unknown pool type \"" + type + "\"");
}

Vector parse_numbers(const std::string& arg) {
  const std::string text = !arg.empty() && arg[0] == '@' ? read_file(arg.substr(1)) : arg;
  Vector out;
  std::size_t i = 0;
  auto is_sep = [](char ch) { return ch == ',' || ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r'; };
  while (i < text.size()) {
    while (i < text.size() && is_sep(text[i])) ++i;
    if (i >= text.size()) break;
    std::size_t j = i;
    while (j < text.size() && !is_sep(text[j])) ++j;
    const std::string_view tok(text.data() + i, j - i);
    double v = 0.0;
    const char* begin = tok.data();
    if (!tok.empty() && tok.front() == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) bad("not a number: \"" + std::string(tok) + "\"");
    out.push_back(v);
    i = j;
  }
  if (out.empty()) bad("empty number list");
  return out;
}

RoutingInstance parse_routing(const Json& spec) {
  if (!spec.is_object()) bad("routing spec must be an object");
  if (!spec.contains("assets") || !spec.at("assets").is_array()) bad("routing spec needs \"assets\"");
  std::map<std::string, std::size_t> names;
  for (const auto& a : spec.at("assets")) {
    if (!a.is_string()) bad("asset names must be strings");
    if (!names.emplace(a.get<std::string>(), names.size()).second) bad("duplicate asset \"" + a.get<std::string>() + "\"");
  }
  RoutingInstance inst;
  inst.n = names.size();
  if (!spec.contains("pools") || !spec.at("pools").is_array()) bad("routing spec needs \"pools\"");
  for (const auto& entry : spec.at("pools")) {
    if (!entry.is_object()) bad("pool entries must be objects");
    const SetPtr pool = parse_pool(entry.contains("pool") ? entry.at("pool") : entry);
    if (!entry.contains("reserves")) bad("pool entry needs \"reserves\"");
    Vector reserves = numbers(entry.at("reserves"), "reserves");
    const double gamma = entry.contains("gamma") ? number(entry, "gamma") : 1.0;
    AssetMapping m;
    m.global_dim = inst.n;
    if (!entry.contains("assets") || !entry.at("assets").is_array()) bad("pool entry needs \"assets\"");
    for (const auto& a : entry.at("assets")) m.local_to_global.push_back(index_of(names, a));
    inst.pools.push_back({make_fee_pool(pool, std::move(reserves), gamma), std::move(m)});
  }
  if (!spec.contains("utility") || !spec.at("utility").is_object()) bad("routing spec needs \"utility\"");
  const Json& u = spec.at("utility");
  const std::string kind = u.value("type", std::string("arbitrage"));
  if (kind == "arbitrage") {
    inst.utility.kind = UtilitySpec::Kind::Arbitrage;
  } else if (kind == "linear") {
    inst.utility.kind = UtilitySpec::Kind::Linear;
  } else {
    bad("unknown utility type \"" + kind + "\"");
  }
  if (!u.contains("prices")) bad("utility needs \"prices\"");
  inst.utility.prices = numbers(u.at("prices"), "prices");
  inst.validate();
  return inst;
}

LiquidityUpdate parse_ledger(const Json& spec) {
  if (!spec.is_object() || !spec.contains("weights") || !spec.at("weights").is_object()) {
    bad("ledger needs a \"weights\" object");
  }
  LiquidityUpdate out;
  for (const auto& [id, w] : spec.at("weights").items()) {
    if (!w.is_number()) bad("ledger weights must be numbers");
    out.ledger.weights[id] = w.get<double>();
  }
  if (!spec.contains("reserves")) bad("ledger needs \"reserves\"");
  out.reserves = numbers(spec.at("reserves"), "reserves");
  return out;
}

Json ledger_to_json(const LiquidityUpdate& state) {
  Json w = Json::object();
  for (const auto& [id, x] : state.ledger.weights) w[id] = x;
  return Json{{"weights", w}, {"reserves", state.reserves}};
}

}  // namespace cfmm::io
