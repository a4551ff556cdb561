#include <benchmark/benchmark.h>

#include "qubus/bell.hpp"
#include "qubus/bell_oracle.hpp"
#include "qubus/cv_oracle.hpp"
#include "qubus/photonics.hpp"
#include "qubus/repeater_sim.hpp"

using namespace qubus;

static void BM_PSpd(benchmark::State& state) {
  const Attenuation att(0.8);
  double f = 0.9;
  for (auto _ : state) {
    benchmark::DoNotOptimize(p_spd(f, att, 0.9));
    f = f > 0.99 ? 0.6 : f + 1e-4;
  }
}
BENCHMARK(BM_PSpd);

static void BM_PurifyAdaptive(benchmark::State& state) {
  const BellMixture a(0.01, 0.95, 0.03, 0.01);
  const GateErrorModel err{0.001};
  for (auto _ : state) {
    benchmark::DoNotOptimize(purify_adaptive(a, a, err));
  }
}
BENCHMARK(BM_PurifyAdaptive);

static void BM_BruteForceSwap(benchmark::State& state) {
  const BellMixture a(0.02, 0.95, 0.02, 0.01);
  for (auto _ : state) {
    benchmark::DoNotOptimize(brute_force_two_pair(a, a, TwoPairOperation::swap));
  }
}
BENCHMARK(BM_BruteForceSwap);

static void BM_CatProjection(benchmark::State& state) {
  const cv::LossChannel ch = cv::LossChannel::from_ratio(0.8);
  for (auto _ : state) {
    const auto s = cv::build_protocol_state(0.6, ch, static_cast<int>(state.range(0)));
    benchmark::DoNotOptimize(cv::measure_cat_projection(s, 1.2 * ch.transmittance));
  }
}
BENCHMARK(BM_CatProjection)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

static void BM_SimulateFourSegments(benchmark::State& state) {
  RepeaterConfig cfg;
  cfg.total_span = 3.2;
  cfg.qubits_per_half_station = 16;
  cfg.base_fidelity = 0.95;
  cfg.target_pairs = 200;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(cfg));
  }
}
BENCHMARK(BM_SimulateFourSegments)->Unit(benchmark::kMillisecond);

static void BM_SimulateFullChain(benchmark::State& state) {
  RepeaterConfig cfg;
  cfg.base_fidelity = 0.95;
  cfg.target_pairs = 50;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run(cfg));
  }
}
BENCHMARK(BM_SimulateFullChain)->Unit(benchmark::kMillisecond)->Iterations(2);
BENCHMARK_MAIN();
