#pragma once

#include "qubus/bell.hpp"

namespace qubus {

enum class TwoPairOperation { purify, swap };

struct TwoPairOracleResult {
  double success_probability;  ///< 1 for swap
  double failure_probability;  ///< weight of rejected outcomes
  BellMixture state;           ///< Bell-basis diagonal of the output pair
  double off_diagonal;         ///< largest |off-diagonal| of the output in the Bell basis
};

/// Reference computation of purify/swap on the explicit 16x16 density
/// matrix of two pairs (A1 B1)(A2 B2), gate by gate: Hadamards, C-Z with
/// two-qubit depolarizing noise, projective Z measurements, Pauli
/// corrections and partial traces.
TwoPairOracleResult brute_force_two_pair(const BellMixture& a, const BellMixture& b,
                                         TwoPairOperation op,
                                         const GateErrorModel& err = GateErrorModel::ideal());

}  // namespace qubus
