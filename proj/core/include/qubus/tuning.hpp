#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qubus/effective_rate.hpp"
#include "qubus/repeater_config.hpp"

namespace qubus {

struct TuneCandidate {
  std::string label;
  double base_fidelity;
  PurificationPolicy policy;
};

struct TuneRow {
  TuneCandidate candidate;
  std::optional<EffectiveRate> rate;  ///< empty when the target is unreachable
  std::string note;
};

struct TuneResult {
  std::vector<TuneRow> rows;
  std::optional<std::size_t> best;  ///< index into rows; empty if nothing is reachable
};

/// Direct generation at 0.98, one round from 0.9, two symmetric rounds from
/// 0.75; all aimed at 0.98.
std::vector<TuneCandidate> default_candidates(double target_fidelity = 0.98);

/// Ranks candidates by analytic P_eff on one segment. Ties go to fewer
/// rounds, then to the earlier candidate. Unreachable candidates are kept
/// with a note. Throws DomainError for an empty grid.
TuneResult tune_base_fidelity(const std::vector<TuneCandidate>& candidates, Attenuation att,
                              double eta_sq, Strategy strategy = Strategy::spd,
                              const GateErrorModel& err = GateErrorModel::ideal());

struct SimulatedTuneRow {
  double base_fidelity;
  std::optional<double> mean_rate;  ///< empty when the config is unreachable
  int total_rounds = 0;             ///< planned purification rounds over all levels
};

struct SimulatedTuneResult {
  std::vector<SimulatedTuneRow> rows;
  std::optional<std::size_t> best;
};

/// Simulates `base` with each F_base in `grid` over `seeds` and picks the
/// highest mean rate; ties go to fewer planned rounds.
SimulatedTuneResult tune_by_simulation(const RepeaterConfig& base, const std::vector<double>& grid,
                                       const std::vector<std::uint64_t>& seeds,
                                       unsigned threads = 1);

}  // namespace qubus
