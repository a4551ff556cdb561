#include "qubus/tuning.hpp"

#include <numeric>

#include "qubus/errors.hpp"
#include "qubus/repeater_sim.hpp"

namespace qubus {

std::vector<TuneCandidate> default_candidates(double target_fidelity) {
  auto with_target = [&](PurificationPolicy p) {
    p.target_fidelity = target_fidelity;
    return p;
  };
  return {
      {"direct", 0.98, with_target(PurificationPolicy::direct())},
      {"one-round", 0.9, with_target(PurificationPolicy::single_round())},
      {"symmetric", 0.75, with_target(PurificationPolicy::symmetric(2))},
  };
}

TuneResult tune_base_fidelity(const std::vector<TuneCandidate>& candidates, Attenuation att,
                              double eta_sq, Strategy strategy, const GateErrorModel& err) {
  if (candidates.empty()) {
    throw DomainError("tuning grid is empty");
  }
  TuneResult out;
  for (const auto& c : candidates) {
    TuneRow row{c, std::nullopt, {}};
    try {
      const auto link = LinkParams::from_fidelity(att, eta_sq, c.base_fidelity, strategy);
      row.rate = effective_rate(c.policy, link, err);
    } catch (const UnreachableTarget& e) {
      row.note = e.what();
    }
    out.rows.push_back(std::move(row));
  }

  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    const auto& r = out.rows[i].rate;
    if (!r) continue;
    if (!out.best) {
      out.best = i;
      continue;
    }
    const auto& b = *out.rows[*out.best].rate;
    if (r->p_eff > b.p_eff || (r->p_eff == b.p_eff && r->rounds < b.rounds)) {
      out.best = i;
    }
  }
  return out;
}

SimulatedTuneResult tune_by_simulation(const RepeaterConfig& base, const std::vector<double>& grid,
                                       const std::vector<std::uint64_t>& seeds, unsigned threads) {
  if (grid.empty()) {
    throw DomainError("tuning grid is empty");
  }
  if (seeds.empty()) {
    throw DomainError("tuning needs at least one seed");
  }
  SimulatedTuneResult out;
  for (double f : grid) {
    RepeaterConfig cfg = base;
    cfg.base_fidelity = f;
    SimulatedTuneRow row{f, std::nullopt, 0};
    try {
      const auto plan = plan_fidelity(cfg);
      row.total_rounds =
          std::accumulate(plan.rounds_per_level.begin(), plan.rounds_per_level.end(), 0);
      row.mean_rate = aggregate_rates(run_seeds(cfg, seeds, threads)).mean;
    } catch (const UnreachableTarget&) {
    } catch (const ConfigError&) {
    }
    out.rows.push_back(row);
  }
  for (std::size_t i = 0; i < out.rows.size(); ++i) {
    const auto& r = out.rows[i];
    if (!r.mean_rate) continue;
    if (!out.best) {
      out.best = i;
      continue;
    }
    const auto& b = out.rows[*out.best];
    if (*r.mean_rate > *b.mean_rate ||
        (*r.mean_rate == *b.mean_rate && r.total_rounds < b.total_rounds)) {
      out.best = i;
    }
  }
  return out;
}

}  // namespace qubus
