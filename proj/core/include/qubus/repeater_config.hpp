#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qubus/bell.hpp"
#include "qubus/photonics.hpp"

namespace qubus {

/// Linear chain of repeater stations running the nested purify-then-swap
/// protocol. Distances are in attenuation lengths unless suffixed _km.
struct RepeaterConfig {
  double total_span = 51.2;
  double segment_span = 0.8;
  int qubits_per_half_station = 16;
  double base_fidelity = 0.9;
  double working_fidelity = 0.98;
  double eta_sq = 0.9;
  double gate_error = 0.001;
  double attenuation_length_km = 25.5;
  double light_speed_km_s = 2.0e5;
  double attempt_overhead_s = 0.0;
  Strategy strategy = Strategy::spd;
  PurificationKind policy = PurificationKind::symmetric_nested;
  int max_purification_rounds = kMaxPurificationRounds;
  std::uint64_t seed = 1;
  int target_pairs = 200;
  double time_budget_s = 60.0;
  /// Replaces the heralding formula's probability when set.
  std::optional<double> success_probability;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;

  int segments() const;
  int nesting_levels() const;
  int total_qubits() const { return 2 * qubits_per_half_station * segments(); }
  double segment_km() const { return segment_span * attenuation_length_km; }
  /// One-way light time over one segment.
  double segment_delay_s() const { return segment_km() / light_speed_km_s; }
  /// Probe flight plus herald return, plus local overhead.
  double attempt_period_s() const { return 2.0 * segment_delay_s() + attempt_overhead_s; }
  double base_success_probability() const;
  GateErrorModel gate_error_model() const { return GateErrorModel{gate_error}; }
  int purification_round_cap() const;
};

/// Flat key/value access to RepeaterConfig fields, used by the config file
/// loader, CLI overrides and report manifests.
struct ConfigKey {
  std::string_view name;
  std::string_view help;
  std::function<std::string(const RepeaterConfig&)> get;
  std::function<void(RepeaterConfig&, const std::string&)> set;
};

const std::vector<ConfigKey>& config_keys();

/// Sets one field from its textual value. Throws ConfigError for unknown
/// keys or unparsable values.
void set_config_value(RepeaterConfig& cfg, std::string_view key, const std::string& value);

/// All fields as text, in declaration order. Optional fields that are unset
/// are omitted.
std::vector<std::pair<std::string, std::string>> config_entries(const RepeaterConfig& cfg);

/// Parses a flat YAML mapping of config keys. Unknown keys are rejected.
RepeaterConfig parse_config(std::string_view text, RepeaterConfig base = {});
RepeaterConfig load_config_file(const std::string& path, RepeaterConfig base = {});

/// Fidelity after each nesting level assuming every purification succeeds.
struct FidelityPlan {
  std::vector<int> rounds_per_level;
  std::vector<double> fidelity_per_level;  ///< after purification at that level
};

/// Throws UnreachableTarget when some level cannot reach the working
/// fidelity within the round cap.
FidelityPlan plan_fidelity(const RepeaterConfig& cfg);

}  // namespace qubus
