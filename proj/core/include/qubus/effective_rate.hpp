#pragma once

#include "qubus/bell.hpp"
#include "qubus/photonics.hpp"

namespace qubus {

struct EffectiveRate {
  double p_eff;             ///< final pairs per channel per attempt
  double base_probability;  ///< P_g used
  int rounds;               ///< purification rounds applied
  BellMixture state;        ///< final pair
};

/// Composes heralded generation with purification. Each symmetric round
/// halves the pair count and multiplies by that round's success
/// probability, so one round gives P_g * P_pur / 2. Pumping with k rounds
/// consumes k + 1 base pairs: P_g * prod(P_pur) / (k + 1).
/// Throws UnreachableTarget when the policy's target fidelity is not met.
EffectiveRate effective_rate(double p_g, const PurificationPolicy& policy, const LinkParams& link,
                             const GateErrorModel& err = GateErrorModel::ideal());

/// Same, with P_g taken from the link's heralding strategy.
EffectiveRate effective_rate(const PurificationPolicy& policy, const LinkParams& link,
                             const GateErrorModel& err = GateErrorModel::ideal());

}  // namespace qubus
