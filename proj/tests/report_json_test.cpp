#include <gtest/gtest.h>

#include "qubus/errors.hpp"
#include "qubus/report_json.hpp"

using namespace qubus;

TEST(ReportJson, ConfigRoundTrip) {
  RepeaterConfig cfg;
  cfg.base_fidelity = 0.123456789012345678;
  cfg.seed = 18446744073709551615ull;
  cfg.strategy = Strategy::csp;
  cfg.success_probability = 0.3;
  const auto j = config_to_json(cfg);
  EXPECT_TRUE(j["base_fidelity"].is_number_float());
  EXPECT_TRUE(j["qubits_per_half_station"].is_number_integer());
  EXPECT_EQ(j["strategy"], "csp");
  const RepeaterConfig back = config_from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(config_entries(back), config_entries(cfg));
}

TEST(ReportJson, UnknownKeyRejected) {
  EXPECT_THROW(config_from_json({{"nope", 1}}), ConfigError);
  EXPECT_THROW(config_from_json(nlohmann::json::array()), ConfigError);
}

TEST(ReportJson, ManifestRoundTrip) {
  RunManifest m{kReportSchema, "simulate", config_to_json(RepeaterConfig{}), {3, 1, 2}, {"out.json"}};
  const RunManifest back = manifest_from_json(nlohmann::json::parse(manifest_to_json(m).dump()));
  EXPECT_EQ(back.schema, m.schema);
  EXPECT_EQ(back.subcommand, "simulate");
  EXPECT_EQ(back.parameters, m.parameters);
  EXPECT_EQ(back.seeds, m.seeds);
  EXPECT_EQ(back.outputs, m.outputs);
  EXPECT_EQ(back.version, tool_version());
  EXPECT_THROW(manifest_from_json({{"schema", 1}}), ConfigError);
}

TEST(ReportJson, ReportFields) {
  SimReport r;
  r.seed = 4;
  r.pairs_delivered = 2;
  r.deliveries = {{0.5, 0.99}, {1.0, 0.981}};
  r.occupancy_by_level = {1.0, 2.0};
  const auto j = report_to_json(r);
  EXPECT_EQ(j["seed"], 4);
  EXPECT_EQ(j["deliveries"].size(), 2u);
  EXPECT_DOUBLE_EQ(j["deliveries"][1][1].get<double>(), 0.981);
  const auto a = aggregate_to_json({3, 1.5, 0.25});
  EXPECT_EQ(a["trials"], 3);
  EXPECT_DOUBLE_EQ(a["mean_rate"].get<double>(), 1.5);
}
