#include "qubus/repeater_config.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qubus/errors.hpp"

namespace qubus {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view key, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) {
    throw ConfigError(std::string(key), "expected a number, got '" + text + "'");
  }
  return v;
}

template <class Int>
Int parse_int(std::string_view key, const std::string& text) {
  Int v{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw ConfigError(std::string(key), "expected an integer, got '" + text + "'");
  }
  return v;
}

ConfigKey real(std::string_view name, std::string_view help, double RepeaterConfig::*field) {
  return {name, help, [field](const RepeaterConfig& c) { return format_double(c.*field); },
          [name, field](RepeaterConfig& c, const std::string& v) { c.*field = parse_double(name, v); }};
}

ConfigKey integer(std::string_view name, std::string_view help, int RepeaterConfig::*field) {
  return {name, help, [field](const RepeaterConfig& c) { return std::to_string(c.*field); },
          [name, field](RepeaterConfig& c, const std::string& v) {
            c.*field = parse_int<int>(name, v);
          }};
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = [] {
    using C = RepeaterConfig;
    std::vector<ConfigKey> k;
    k.push_back(real("total_span", "chain length in attenuation lengths", &C::total_span));
    k.push_back(real("segment_span", "station spacing in attenuation lengths", &C::segment_span));
    k.push_back(integer("qubits_per_half_station", "qubits on each side of a station",
                        &C::qubits_per_half_station));
    k.push_back(real("base_fidelity", "heralded base-pair fidelity", &C::base_fidelity));
    k.push_back(real("working_fidelity", "fidelity required before swapping", &C::working_fidelity));
    k.push_back(real("eta_sq", "detector efficiency", &C::eta_sq));
    k.push_back(real("gate_error", "depolarizing weight per local C-Z", &C::gate_error));
    k.push_back(real("attenuation_length_km", "fiber attenuation length", &C::attenuation_length_km));
    k.push_back(real("light_speed_km_s", "signal speed in fiber", &C::light_speed_km_s));
    k.push_back(real("attempt_overhead_s", "local time added to each attempt", &C::attempt_overhead_s));
    k.push_back({"strategy", "heralding measurement: spd or csp",
                 [](const C& c) { return std::string(to_string(c.strategy)); },
                 [](C& c, const std::string& v) {
                   auto s = parse_strategy(v);
                   if (!s) throw ConfigError("strategy", "expected spd or csp, got '" + v + "'");
                   c.strategy = *s;
                 }});
    k.push_back({"policy", "purification matching: symmetric_nested, pumping or single_round",
                 [](const C& c) { return std::string(to_string(c.policy)); },
                 [](C& c, const std::string& v) {
                   auto p = parse_purification_kind(v);
                   if (!p) throw ConfigError("policy", "unknown purification policy '" + v + "'");
                   c.policy = *p;
                 }});
    k.push_back(integer("max_purification_rounds", "purification rounds allowed per level",
                        &C::max_purification_rounds));
    k.push_back({"seed", "master RNG seed", [](const C& c) { return std::to_string(c.seed); },
                 [](C& c, const std::string& v) { c.seed = parse_int<std::uint64_t>("seed", v); }});
    k.push_back(integer("target_pairs", "stop after this many delivered pairs", &C::target_pairs));
    k.push_back(real("time_budget_s", "stop after this much simulated time", &C::time_budget_s));
    k.push_back({"success_probability", "override the heralding probability",
                 [](const C& c) {
                   return c.success_probability ? format_double(*c.success_probability)
                                                : std::string();
                 },
                 [](C& c, const std::string& v) {
                   c.success_probability = parse_double("success_probability", v);
                 }});
    return k;
  }();
  return keys;
}

void set_config_value(RepeaterConfig& cfg, std::string_view key, const std::string& value) {
  for (const auto& k : config_keys()) {
    if (k.name == key) {
      k.set(cfg, value);
      return;
    }
  }
  throw ConfigError(std::string(key), "unknown configuration key");
}

std::vector<std::pair<std::string, std::string>> config_entries(const RepeaterConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& k : config_keys()) {
    auto v = k.get(cfg);
    if (!v.empty()) {
      out.emplace_back(std::string(k.name), std::move(v));
    }
  }
  return out;
}

RepeaterConfig parse_config(std::string_view text, RepeaterConfig base) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError("<file>", std::string("malformed config: ") + e.what());
  }
  if (root.IsNull()) {
    return base;
  }
  if (!root.IsMap()) {
    throw ConfigError("<file>", "config must be a flat key/value mapping");
  }
  for (const auto& entry : root) {
    const auto key = entry.first.as<std::string>();
    if (!entry.second.IsScalar()) {
      throw ConfigError(key, "value must be a scalar");
    }
    set_config_value(base, key, entry.second.as<std::string>());
  }
  return base;
}

RepeaterConfig load_config_file(const std::string& path, RepeaterConfig base) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("<file>", "cannot open config file '" + path + "'");
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

int RepeaterConfig::segments() const {
  return static_cast<int>(std::lround(total_span / segment_span));
}

int RepeaterConfig::nesting_levels() const {
  int levels = 0;
  for (int n = segments(); n > 1; n >>= 1) {
    ++levels;
  }
  return levels;
}

double RepeaterConfig::base_success_probability() const {
  if (success_probability) {
    return *success_probability;
  }
  const Attenuation att(segment_span);
  return strategy == Strategy::csp ? p_csp(base_fidelity, att) : p_spd(base_fidelity, att, eta_sq);
}

int RepeaterConfig::purification_round_cap() const {
  return policy == PurificationKind::single_round ? std::min(1, max_purification_rounds)
                                                  : max_purification_rounds;
}

void RepeaterConfig::validate() const {
  auto require = [](bool ok, const char* field, const char* what) {
    if (!ok) throw ConfigError(field, what);
  };
  require(std::isfinite(total_span) && total_span > 0.0, "total_span", "must be > 0");
  require(std::isfinite(segment_span) && segment_span > 0.0, "segment_span", "must be > 0");
  const double ratio = total_span / segment_span;
  const int n = segments();
  require(n >= 1 && std::abs(ratio - n) <= 1e-9 * ratio && is_power_of_two(n), "segment_span",
          "total_span / segment_span must be a power-of-two integer");
  require(qubits_per_half_station >= 2, "qubits_per_half_station", "must be >= 2");
  require(base_fidelity > 0.5 && base_fidelity <= 1.0, "base_fidelity", "must lie in (1/2, 1]");
  require(working_fidelity > 0.5 && working_fidelity <= 1.0, "working_fidelity",
          "must lie in (1/2, 1]");
  require(eta_sq > 0.0 && eta_sq <= 1.0, "eta_sq", "must lie in (0, 1]");
  require(gate_error >= 0.0 && gate_error <= 1.0, "gate_error", "must lie in [0, 1]");
  require(attenuation_length_km > 0.0, "attenuation_length_km", "must be > 0");
  require(light_speed_km_s > 0.0, "light_speed_km_s", "must be > 0");
  require(attempt_overhead_s >= 0.0, "attempt_overhead_s", "must be >= 0");
  require(max_purification_rounds >= 0, "max_purification_rounds", "must be >= 0");
  require(target_pairs >= 1, "target_pairs", "must be >= 1");
  require(time_budget_s > 0.0, "time_budget_s", "must be > 0");
  if (success_probability) {
    require(*success_probability >= 0.0 && *success_probability <= 1.0, "success_probability",
            "must lie in [0, 1]");
  }
}

FidelityPlan plan_fidelity(const RepeaterConfig& cfg) {
  const GateErrorModel err = cfg.gate_error_model();
  const int cap = cfg.purification_round_cap();
  const bool pumping = cfg.policy == PurificationKind::pumping;

  FidelityPlan plan;
  BellMixture state = conditioned_state(cfg.base_fidelity);
  for (int level = 0; level <= cfg.nesting_levels(); ++level) {
    if (level > 0) {
      state = swap(state, state, err);
    }
    const BellMixture fresh = state;
    int rounds = 0;
    while (state.fidelity() < cfg.working_fidelity && rounds < cap) {
      state = purify_adaptive(state, pumping ? fresh : state, err).state;
      ++rounds;
    }
    if (state.fidelity() < cfg.working_fidelity) {
      char buf[200];
      std::snprintf(buf, sizeof buf,
                    "level %d reaches fidelity %.6f after %d purification round(s); working "
                    "fidelity %.4f unreachable",
                    level, state.fidelity(), rounds, cfg.working_fidelity);
      throw UnreachableTarget(buf);
    }
    plan.rounds_per_level.push_back(rounds);
    plan.fidelity_per_level.push_back(state.fidelity());
  }
  return plan;
}

}  // namespace qubus
