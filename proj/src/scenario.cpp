#include "taxidisp/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <fmt/format.h>

namespace taxidisp {

void ScenarioConfig::set_rate_per_hour(double per_hour) {
  const double per_interval = per_hour * demand.interval / 3600.0;
  const double rounded = std::round(per_interval);
  if (per_hour < 0.0 || std::abs(per_interval - rounded) > 1e-9) {
    throw ConfigError(fmt::format(
        "rate {}/h does not give a whole number of customers per {} s interval", per_hour,
        demand.interval));
  }
  demand.customers_per_interval = static_cast<int>(rounded);
}

void ScenarioConfig::validate() const {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  require(area.width > 0.0 && area.height > 0.0, "area dimensions must be positive");
  require(n_taxis >= 0, "n_taxis must be non-negative");
  require(speed_kmh > 0.0, "speed_kmh must be positive");
  require(tick > 0.0, "tick must be positive");
  require(dwell.pickup >= 0.0 && dwell.dropoff >= 0.0, "dwell times must be non-negative");
  tariff.validate();
  require(demand.customers_per_interval >= 0, "customers_per_interval must be non-negative");
  require(demand.interval > 0.0, "interval must be positive");
  require(demand.horizon > 0.0, "horizon must be positive");
  require(center.center_sigma > 0.0 && center.boundary_sigma > 0.0, "sigmas must be positive");
  require(center.outbound_prob >= 0.0 && center.outbound_prob <= 1.0,
          "outbound_prob must lie in [0, 1]");
  require(gamma > 0.0, "gamma must be positive");
}

ScenarioConfig desk_scale_config() {
  ScenarioConfig cfg;
  cfg.area = {2700.0, 2700.0};
  cfg.n_taxis = 100;
  cfg.demand.horizon = 2700.0;
  cfg.demand.customers_per_interval = 150;
  cfg.demand.distribution = TripDistribution::Center;
  cfg.center.center_sigma = 300.0;
  cfg.center.boundary_sigma = 300.0;
  cfg.tariff.est_trip = 1425.0;
  cfg.strategy = Strategy::Combined;
  return cfg;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view v, const std::string& where) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError(fmt::format("{}: expected a number, got '{}'", where, v));
  }
  return out;
}

long long parse_int(std::string_view v, const std::string& where) {
  long long out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(fmt::format("{}: expected an integer, got '{}'", where, v));
  }
  return out;
}

bool parse_bool(std::string_view v, const std::string& where) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(fmt::format("{}: expected true/false, got '{}'", where, v));
}

using Setter = std::function<void(ScenarioConfig&, std::string_view, const std::string&)>;

const std::map<std::string, Setter, std::less<>>& setters() {
  static const std::map<std::string, Setter, std::less<>> table = {
      {"area_width", [](auto& c, auto v, auto& w) { c.area.width = parse_double(v, w); }},
      {"area_height", [](auto& c, auto v, auto& w) { c.area.height = parse_double(v, w); }},
      {"n_taxis", [](auto& c, auto v, auto& w) { c.n_taxis = static_cast<int>(parse_int(v, w)); }},
      {"speed_kmh", [](auto& c, auto v, auto& w) { c.speed_kmh = parse_double(v, w); }},
      {"tick", [](auto& c, auto v, auto& w) { c.tick = parse_double(v, w); }},
      {"pickup_dwell", [](auto& c, auto v, auto& w) { c.dwell.pickup = parse_double(v, w); }},
      {"dropoff_dwell", [](auto& c, auto v, auto& w) { c.dwell.dropoff = parse_double(v, w); }},
      {"fixed_cost", [](auto& c, auto v, auto& w) { c.tariff.fixed_cost = parse_double(v, w); }},
      {"fare", [](auto& c, auto v, auto& w) { c.tariff.fare = parse_double(v, w) / 1000.0; }},
      {"op_cost", [](auto& c, auto v, auto& w) { c.tariff.op_cost = parse_double(v, w) / 1000.0; }},
      {"est_trip", [](auto& c, auto v, auto& w) { c.tariff.est_trip = parse_double(v, w); }},
      {"customers_per_interval",
       [](auto& c, auto v, auto& w) {
         c.demand.customers_per_interval = static_cast<int>(parse_int(v, w));
       }},
      {"interval", [](auto& c, auto v, auto& w) { c.demand.interval = parse_double(v, w); }},
      {"horizon", [](auto& c, auto v, auto& w) { c.demand.horizon = parse_double(v, w); }},
      {"distribution",
       [](auto& c, auto v, auto&) { c.demand.distribution = parse_distribution(v); }},
      {"center_sigma", [](auto& c, auto v, auto& w) { c.center.center_sigma = parse_double(v, w); }},
      {"boundary_sigma",
       [](auto& c, auto v, auto& w) { c.center.boundary_sigma = parse_double(v, w); }},
      {"outbound_prob",
       [](auto& c, auto v, auto& w) { c.center.outbound_prob = parse_double(v, w); }},
      {"dest_known", [](auto& c, auto v, auto& w) { c.dest_known = parse_bool(v, w); }},
      {"strategy", [](auto& c, auto v, auto&) { c.strategy = parse_strategy(v); }},
      {"gamma", [](auto& c, auto v, auto& w) { c.gamma = parse_double(v, w); }},
      {"allow_displacement",
       [](auto& c, auto v, auto& w) { c.allow_displacement = parse_bool(v, w); }},
      {"seed",
       [](auto& c, auto v, auto& w) {
         const long long s = parse_int(v, w);
         if (s < 0) throw ConfigError(fmt::format("{}: seed must be non-negative", w));
         c.seed = static_cast<std::uint64_t>(s);
       }},
  };
  return table;
}

}  // namespace

ScenarioConfig parse_config(std::string_view text, std::string_view source) {
  ScenarioConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::string where = fmt::format("{}:{}", source, line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("{}: expected 'key = value'", where));
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    const auto it = setters().find(key);
    if (it == setters().end()) throw ConfigError(fmt::format("{}: unknown key '{}'", where, key));
    if (!seen.emplace(key).second) {
      throw ConfigError(fmt::format("{}: key '{}' given twice", where, key));
    }
    if (value.empty()) throw ConfigError(fmt::format("{}: missing value for '{}'", where, key));
    it->second(cfg, value, where);
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

std::string to_config_text(const ScenarioConfig& c) {
  std::string out;
  auto line = [&](std::string_view key, const auto& value) {
    out += fmt::format("{} = {}\n", key, value);
  };
  line("area_width", c.area.width);
  line("area_height", c.area.height);
  line("n_taxis", c.n_taxis);
  line("speed_kmh", c.speed_kmh);
  line("tick", c.tick);
  line("pickup_dwell", c.dwell.pickup);
  line("dropoff_dwell", c.dwell.dropoff);
  line("fixed_cost", c.tariff.fixed_cost);
  line("fare", c.tariff.fare * 1000.0);
  line("op_cost", c.tariff.op_cost * 1000.0);
  line("est_trip", c.tariff.est_trip);
  line("customers_per_interval", c.demand.customers_per_interval);
  line("interval", c.demand.interval);
  line("horizon", c.demand.horizon);
  line("distribution", to_string(c.demand.distribution));
  line("center_sigma", c.center.center_sigma);
  line("boundary_sigma", c.center.boundary_sigma);
  line("outbound_prob", c.center.outbound_prob);
  line("dest_known", c.dest_known ? "true" : "false");
  line("strategy", to_string(c.strategy));
  line("gamma", c.gamma);
  line("allow_displacement", c.allow_displacement ? "true" : "false");
  line("seed", c.seed);
  return out;
}

}  // namespace taxidisp
