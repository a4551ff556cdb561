#include "qubus/effective_rate.hpp"

#include <cstdio>
#include <string>

#include "qubus/errors.hpp"

namespace qubus {

namespace {

std::string unreachable_message(double base, int rounds, double reached, double target) {
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "base fidelity %.4f reaches %.6f after %d round(s); target %.4f unreachable", base,
                reached, rounds, target);
  return buf;
}

}  // namespace

EffectiveRate effective_rate(double p_g, const PurificationPolicy& policy, const LinkParams& link,
                             const GateErrorModel& err) {
  policy.validate();
  err.validate();
  if (!(p_g >= 0.0 && p_g <= 1.0)) {
    throw DomainError("generation probability must lie in [0, 1]");
  }

  const BellMixture base = link.heralded_state();
  const int cap = policy.rounds.value_or(
      policy.kind == PurificationKind::single_round ? 1 : kMaxPurificationRounds);
  const bool pumping = policy.kind == PurificationKind::pumping;

  BellMixture state = base;
  double symmetric_p = p_g;
  double success_product = 1.0;
  int rounds = 0;
  auto reached = [&] {
    return policy.target_fidelity && state.fidelity() >= *policy.target_fidelity;
  };

  while (rounds < cap) {
    if (!policy.rounds && reached()) {
      break;
    }
    const auto res = purify_adaptive(state, pumping ? base : state, err);
    symmetric_p *= res.success_probability / 2.0;
    success_product *= res.success_probability;
    state = res.state;
    ++rounds;
  }

  if (policy.target_fidelity && !reached()) {
    throw UnreachableTarget(
        unreachable_message(base.fidelity(), rounds, state.fidelity(), *policy.target_fidelity));
  }

  const double p_eff =
      pumping ? p_g * success_product / static_cast<double>(rounds + 1) : symmetric_p;
  return {p_eff, p_g, rounds, state};
}

EffectiveRate effective_rate(const PurificationPolicy& policy, const LinkParams& link,
                             const GateErrorModel& err) {
  return effective_rate(link.success_probability(), policy, link, err);
}

}  // namespace qubus
