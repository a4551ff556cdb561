#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qubus/repeater_config.hpp"
#include "qubus/repeater_sim.hpp"

namespace qubus {

inline constexpr const char* kReportSchema = "qubus.simulate/1";
inline constexpr const char* kLinkCurveSchema = "qubus.link-curve/1";

std::string tool_version();

/// Config fields keyed by their flat config names. Unset optionals are omitted.
nlohmann::json config_to_json(const RepeaterConfig& cfg);
/// Inverse of config_to_json; unknown keys raise ConfigError.
RepeaterConfig config_from_json(const nlohmann::json& j, RepeaterConfig base = {});

nlohmann::json report_to_json(const SimReport& r);
nlohmann::json aggregate_to_json(const AggregateRate& a);

/// Everything needed to re-run a command bit-identically.
struct RunManifest {
  std::string schema;
  std::string subcommand;
  nlohmann::json parameters;  ///< resolved config or subcommand parameters
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> outputs;
  std::string version = tool_version();
};

nlohmann::json manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& j);

}  // namespace qubus
