#include "qubus/report_json.hpp"

#include <cstdio>
#include <cstdlib>

#include "qubus/errors.hpp"

namespace qubus {

std::string tool_version() { return QUBUS_VERSION_STRING; }

namespace {

nlohmann::json typed_value(const std::string& text) {
  char* end = nullptr;
  const double d = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0') {
    return text;
  }
  if (text.find_first_of(".eEn") == std::string::npos) {
    if (text.front() == '-') {
      return std::strtoll(text.c_str(), nullptr, 10);
    }
    return std::strtoull(text.c_str(), nullptr, 10);
  }
  return d;
}

std::string text_value(const std::string& key, const nlohmann::json& v) {
  switch (v.type()) {
    case nlohmann::json::value_t::string: return v.get<std::string>();
    case nlohmann::json::value_t::number_unsigned: return std::to_string(v.get<std::uint64_t>());
    case nlohmann::json::value_t::number_integer: return std::to_string(v.get<std::int64_t>());
    case nlohmann::json::value_t::number_float: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
      return buf;
    }
    case nlohmann::json::value_t::boolean: return v.get<bool>() ? "true" : "false";
    default: throw ConfigError(key, "expected a scalar value");
  }
}

}  // namespace

nlohmann::json config_to_json(const RepeaterConfig& cfg) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [key, value] : config_entries(cfg)) {
    j[key] = typed_value(value);
  }
  return j;
}

RepeaterConfig config_from_json(const nlohmann::json& j, RepeaterConfig base) {
  if (!j.is_object()) {
    throw ConfigError("config", "expected an object");
  }
  for (const auto& [key, value] : j.items()) {
    set_config_value(base, key, text_value(key, value));
  }
  return base;
}

nlohmann::json report_to_json(const SimReport& r) {
  nlohmann::json deliveries = nlohmann::json::array();
  for (const auto& d : r.deliveries) {
    deliveries.push_back({d.time_s, d.fidelity});
  }
  return {
      {"seed", r.seed},
      {"pairs_delivered", r.pairs_delivered},
      {"simulated_seconds", r.simulated_seconds},
      {"rate_pairs_per_s", r.rate_pairs_per_s},
      {"fidelity_min", r.fidelity_min},
      {"fidelity_mean", r.fidelity_mean},
      {"below_threshold", r.below_threshold},
      {"stop_reason", r.stop_reason},
      {"segments", r.segments},
      {"total_qubits", r.total_qubits},
      {"base_success_probability", r.base_success_probability},
      {"attempt_period_s", r.attempt_period_s},
      {"counts",
       {{"attempts", r.attempts},
        {"base_pairs", r.base_pairs},
        {"purifications_succeeded", r.purifications_succeeded},
        {"purifications_failed", r.purifications_failed},
        {"swaps", r.swaps},
        {"discarded", r.discarded}}},
      {"occupancy",
       {{"held_by_level", r.occupancy_by_level},
        {"free", r.mean_free_qubits},
        {"attempting", r.mean_attempting_qubits}}},
      {"deliveries", deliveries},
  };
}

nlohmann::json aggregate_to_json(const AggregateRate& a) {
  return {{"trials", a.trials}, {"mean_rate", a.mean}, {"stderr_rate", a.stderr_of_mean}};
}

nlohmann::json manifest_to_json(const RunManifest& m) {
  return {
      {"schema", m.schema},
      {"subcommand", m.subcommand},
      {"parameters", m.parameters},
      {"seeds", m.seeds},
      {"outputs", m.outputs},
      {"tool_version", m.version},
  };
}

RunManifest manifest_from_json(const nlohmann::json& j) {
  try {
    RunManifest m;
    m.schema = j.at("schema").get<std::string>();
    m.subcommand = j.at("subcommand").get<std::string>();
    m.parameters = j.at("parameters");
    m.seeds = j.value("seeds", std::vector<std::uint64_t>{});
    m.outputs = j.value("outputs", std::vector<std::string>{});
    m.version = j.at("tool_version").get<std::string>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("manifest", e.what());
  }
}

}  // namespace qubus
