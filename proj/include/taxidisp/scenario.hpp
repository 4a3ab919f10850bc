#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "taxidisp/dispatch.hpp"
#include "taxidisp/economics.hpp"
#include "taxidisp/fleet.hpp"
#include "taxidisp/spatial.hpp"

namespace taxidisp {

/// Full parameterization of one simulation run. Defaults reproduce the
/// 9 x 9 km, 1000-taxi city setting.
struct ScenarioConfig {
  AreaSpec area;
  int n_taxis = 1000;
  double speed_kmh = 17.0;
  double tick = 5.0;
  DwellTimes dwell;
  TariffScheme tariff;
  DemandSpec demand;
  CenterDistParams center;
  bool dest_known = false;
  Strategy strategy = Strategy::Ntnr;
  double gamma = 1.0 / 0.00085;
  bool allow_displacement = true;
  std::uint64_t seed = 0;

  double speed_mps() const { return speed_kmh / 3.6; }

  /// Demand in customers per hour; must map to a whole number per interval.
  double rate_per_hour() const { return demand.customers_per_interval * 3600.0 / demand.interval; }
  void set_rate_per_hour(double per_hour);

  /// Throws ConfigError on the first violated invariant.
  void validate() const;
};

/// 100 taxis on a 2.7 x 2.7 km square for 45 minutes, Center trips, with
/// lengths scaled by 0.3 and 600 requests per hour.
ScenarioConfig desk_scale_config();

/// Parses `key = value` lines. Blank lines and `#` comments are ignored;
/// unknown keys, repeated keys and malformed values raise ConfigError.
/// Keys not given keep their defaults. `fare` and `op_cost` are in euros
/// per kilometer, distances in meters, times in seconds. The result is
/// validated.
ScenarioConfig parse_config(std::string_view text, std::string_view source = "<config>");

/// Reads and parses a config file. Throws ConfigError if it cannot be read.
ScenarioConfig load_config(const std::filesystem::path& path);

/// Renders a config in the format parse_config accepts.
std::string to_config_text(const ScenarioConfig& cfg);

}  // namespace taxidisp
