#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "qubus/errors.hpp"
#include "qubus/repeater_sim.hpp"

using namespace qubus;

namespace {

// Four segments, quick to run.
RepeaterConfig small_chain(std::uint64_t seed = 1) {
  RepeaterConfig cfg;
  cfg.total_span = 3.2;
  cfg.segment_span = 0.8;
  cfg.qubits_per_half_station = 8;
  cfg.base_fidelity = 0.95;
  cfg.target_pairs = 50;
  cfg.time_budget_s = 5.0;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST(SegmentLink, BinomialWithinThreeSigma) {
  constexpr int n = 1'000'000;
  for (double p : {0.0337, 0.1334, 0.5}) {
    SegmentLink link(p, 99, 3);
    int k = 0;
    for (int i = 0; i < n; ++i) k += link.attempt_generation();
    const double sigma = std::sqrt(n * p * (1.0 - p));
    EXPECT_LT(std::abs(k - n * p), 3.0 * sigma) << "p=" << p << " k=" << k;
  }
}

TEST(SegmentLink, StreamsDifferBySegmentAndSeed) {
  SegmentLink a(0.5, 1, 0), b(0.5, 1, 1), c(0.5, 2, 0), a2(0.5, 1, 0);
  int diff_b = 0, diff_c = 0, same = 0;
  for (int i = 0; i < 256; ++i) {
    const bool x = a.attempt_generation();
    diff_b += x != b.attempt_generation();
    diff_c += x != c.attempt_generation();
    same += x == a2.attempt_generation();
  }
  EXPECT_GT(diff_b, 64);
  EXPECT_GT(diff_c, 64);
  EXPECT_EQ(same, 256);
}

TEST(Simulator, TrivialLinkDeliversQPerPeriod) {
  RepeaterConfig cfg;
  cfg.total_span = 0.8;
  cfg.segment_span = 0.8;
  cfg.qubits_per_half_station = 16;
  cfg.success_probability = 1.0;
  cfg.base_fidelity = 0.99;
  cfg.working_fidelity = 0.98;
  cfg.target_pairs = 160;
  const SimReport r = run(cfg);
  EXPECT_EQ(r.pairs_delivered, 160);
  EXPECT_EQ(r.stop_reason, "target_pairs");
  EXPECT_NEAR(r.simulated_seconds, 10.0 * cfg.attempt_period_s(), 1e-15);
  EXPECT_NEAR(r.rate_pairs_per_s, 16.0 / cfg.attempt_period_s(), 1e-9 * r.rate_pairs_per_s);
  EXPECT_DOUBLE_EQ(r.fidelity_min, 0.99);
  EXPECT_DOUBLE_EQ(r.fidelity_mean, 0.99);
  EXPECT_EQ(r.attempts, 160);
}

TEST(Simulator, ZeroProbabilityNeverSucceeds) {
  RepeaterConfig cfg = small_chain();
  cfg.success_probability = 0.0;
  cfg.time_budget_s = 0.05;
  const SimReport r = run(cfg);
  EXPECT_EQ(r.pairs_delivered, 0);
  EXPECT_EQ(r.base_pairs, 0);
  EXPECT_GT(r.attempts, 0);
  EXPECT_EQ(r.stop_reason, "time_budget");
  EXPECT_DOUBLE_EQ(r.simulated_seconds, 0.05);
}

TEST(Simulator, ConservationAndCausalityHoldEveryStep) {
  for (std::uint64_t seed : {1, 2, 3}) {
    Simulator sim(small_chain(seed));
    long steps = 0;
    while (sim.step()) {
      ASSERT_EQ(sim.conservation_violations(), 0) << "step " << steps;
      ASSERT_EQ(sim.causality_violations(), 0) << "step " << steps;
      ++steps;
    }
    EXPECT_GT(steps, 100);
    EXPECT_EQ(sim.delivered(), 50);
  }
}

TEST(Simulator, DeliveriesAreReportedAtAnyFidelity) {
  const SimReport r = run(small_chain());
  ASSERT_EQ(static_cast<long>(r.deliveries.size()), r.pairs_delivered);
  long below = 0;
  double prev = 0.0;
  for (const auto& d : r.deliveries) {
    below += d.fidelity < 0.98;
    EXPECT_GE(d.time_s, prev);
    prev = d.time_s;
  }
  EXPECT_EQ(below, r.below_threshold);
  EXPECT_GT(r.fidelity_mean, 0.95);
}

TEST(Simulator, SameSeedSameReport) {
  const SimReport a = run(small_chain(7));
  const SimReport b = run(small_chain(7));
  EXPECT_EQ(a.deliveries, b.deliveries);
  EXPECT_EQ(a.attempts, b.attempts);
  EXPECT_EQ(a.swaps, b.swaps);
  EXPECT_EQ(a.occupancy_by_level, b.occupancy_by_level);
  const SimReport c = run(small_chain(8));
  EXPECT_NE(a.deliveries, c.deliveries);
}

TEST(Simulator, ThreadCountDoesNotChangeResults) {
  const std::vector<std::uint64_t> seeds{5, 1, 9, 4};
  const auto serial = run_seeds(small_chain(), seeds, 1);
  const auto parallel = run_seeds(small_chain(), seeds, 3);
  ASSERT_EQ(serial.size(), 4u);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    EXPECT_EQ(serial[i].seed, seeds[i]);
    EXPECT_EQ(serial[i].deliveries, parallel[i].deliveries);
  }
  auto reversed = serial;
  std::reverse(reversed.begin(), reversed.end());
  EXPECT_EQ(aggregate_rates(serial).mean, aggregate_rates(reversed).mean);
  EXPECT_EQ(aggregate_rates(serial).stderr_of_mean, aggregate_rates(reversed).stderr_of_mean);
}

TEST(Simulator, OccupancyAccountsForAllQubits) {
  const auto cfg = small_chain();
  const SimReport r = run(cfg);
  double held = 0.0;
  for (double x : r.occupancy_by_level) held += x;
  EXPECT_NEAR(held + r.mean_free_qubits + r.mean_attempting_qubits, cfg.total_qubits(), 1e-6);
}

TEST(Simulator, UnreachablePlanIsConfigError) {
  RepeaterConfig cfg = small_chain();
  cfg.base_fidelity = 0.75;
  cfg.policy = PurificationKind::single_round;
  try {
    Simulator sim(cfg);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "base_fidelity");
  }
}

TEST(Simulator, TraceIsWritten) {
  Simulator sim(small_chain(), true);
  sim.run();
  ASSERT_FALSE(sim.trace().empty());
  std::ostringstream os;
  write_trace_csv(os, sim.trace());
  EXPECT_EQ(os.str().rfind("time_s,event,station_a,station_b,level,fidelity\n", 0), 0u);
}

TEST(Aggregate, MeanAndStderr) {
  std::vector<SimReport> rs(4);
  const double rates[] = {1.0, 2.0, 3.0, 4.0};
  for (int i = 0; i < 4; ++i) rs[i].rate_pairs_per_s = rates[i];
  const auto a = aggregate_rates(rs);
  EXPECT_EQ(a.trials, 4u);
  EXPECT_DOUBLE_EQ(a.mean, 2.5);
  EXPECT_NEAR(a.stderr_of_mean, std::sqrt(5.0 / 3.0 / 4.0), 1e-15);
}
