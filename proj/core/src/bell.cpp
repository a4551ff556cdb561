#include "qubus/bell.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qubus {

// Coefficient index doubles as the two-bit Pauli label (x, z) of the Bell
// state relative to Phi+: bit 1 is the bit-flip part, bit 0 the phase part.
// Relative to the Phi- target the label is index ^ 1.

std::string_view to_string(Bell b) {
  switch (b) {
    case Bell::phi_plus: return "phi_plus";
    case Bell::phi_minus: return "phi_minus";
    case Bell::psi_plus: return "psi_plus";
    case Bell::psi_minus: return "psi_minus";
  }
  return "?";
}

BellMixture::BellMixture() : p_{0.25, 0.25, 0.25, 0.25} {}

BellMixture::BellMixture(double phi_plus, double phi_minus, double psi_plus, double psi_minus)
    : p_{phi_plus, phi_minus, psi_plus, psi_minus} {
  for (double v : p_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("Bell coefficient " + std::to_string(v) + " outside [0, 1]");
    }
  }
  const double sum = std::accumulate(p_.begin(), p_.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-12) {
    throw std::invalid_argument("Bell coefficients sum to " + std::to_string(sum));
  }
}

BellMixture BellMixture::pure(Bell b) {
  std::array<double, 4> p{};
  p[static_cast<std::size_t>(b)] = 1.0;
  return BellMixture(p[0], p[1], p[2], p[3]);
}

BellMixture BellMixture::dephased(double fidelity) {
  return BellMixture(1.0 - fidelity, fidelity, 0.0, 0.0);
}

bool BellMixture::rank_two(double tol) const {
  return p_[2] <= tol && p_[3] <= tol;
}

double BellMixture::max_abs_difference(const BellMixture& other) const {
  double d = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    d = std::max(d, std::abs(p_[i] - other.p_[i]));
  }
  return d;
}

void GateErrorModel::validate() const {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("gate error epsilon must lie in [0, 1]");
  }
}

namespace {

// Renormalize away accumulated rounding so the invariant sum == 1 holds.
BellMixture normalized(std::array<double, 4> p) {
  for (double& v : p) {
    v = std::clamp(v, 0.0, 1.0);
  }
  const double sum = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) {
    v /= sum;
  }
  return BellMixture(p[0], p[1], p[2], p[3]);
}

}  // namespace

PurificationResult purify(const BellMixture& a, const BellMixture& b, const GateErrorModel& err) {
  err.validate();
  const auto& p = a.coefficients();
  const auto& q = b.coefficients();

  // Accept when the phase bits agree; the survivor keeps that phase and the
  // XOR of the bit-flip parts.
  std::array<double, 4> joint{};
  double accept = 0.0;
  for (unsigned z = 0; z < 2; ++z) {
    for (unsigned x1 = 0; x1 < 2; ++x1) {
      for (unsigned x2 = 0; x2 < 2; ++x2) {
        const double w = p[(x1 << 1) | z] * q[(x2 << 1) | z];
        joint[((x1 ^ x2) << 1) | z] += w;
        accept += w;
      }
    }
  }

  // A depolarized C-Z pair (one per side) leaves the four qubits maximally
  // mixed, which passes the comparison half the time and yields a uniform pair.
  const double keep = (1.0 - err.epsilon) * (1.0 - err.epsilon);
  const double noise = 1.0 - keep;
  const double success = keep * accept + 0.5 * noise;
  if (success <= 0.0) {
    return {0.0, BellMixture::uniform()};
  }
  std::array<double, 4> out{};
  for (std::size_t i = 0; i < 4; ++i) {
    out[i] = (keep * joint[i] + 0.125 * noise) / success;
  }
  return {success, normalized(out)};
}

BellMixture swap(const BellMixture& a, const BellMixture& b, const GateErrorModel& err) {
  err.validate();
  const auto& p = a.coefficients();
  const auto& q = b.coefficients();
  std::array<double, 4> out{};
  for (unsigned i = 0; i < 4; ++i) {
    for (unsigned j = 0; j < 4; ++j) {
      // Labels compose by XOR relative to Phi-; relative to Phi+ that is
      // i ^ j ^ 1.
      out[i ^ j ^ 1u] += p[i] * q[j];
    }
  }
  return apply_gate_error(normalized(out), err);
}

BellMixture permute_errors(const BellMixture& s, const std::array<Bell, 3>& order) {
  std::array<double, 4> out{};
  out[static_cast<std::size_t>(Bell::phi_minus)] = s[Bell::phi_minus];
  constexpr std::array<Bell, 3> slots{Bell::phi_plus, Bell::psi_plus, Bell::psi_minus};
  for (std::size_t k = 0; k < 3; ++k) {
    out[static_cast<std::size_t>(slots[k])] = s[order[k]];
  }
  return BellMixture(out[0], out[1], out[2], out[3]);
}

PurificationResult purify_adaptive(const BellMixture& a, const BellMixture& b,
                                   const GateErrorModel& err) {
  std::array<Bell, 3> order{Bell::phi_plus, Bell::psi_plus, Bell::psi_minus};
  PurificationResult best = purify(a, b, err);
  while (std::next_permutation(order.begin(), order.end())) {
    auto r = purify(permute_errors(a, order), permute_errors(b, order), err);
    if (r.state.fidelity() > best.state.fidelity()) {
      best = r;
    }
  }
  return best;
}

BellMixture apply_gate_error(const BellMixture& s, const GateErrorModel& err) {
  err.validate();
  std::array<double, 4> out = s.coefficients();
  for (double& v : out) {
    v = (1.0 - err.epsilon) * v + 0.25 * err.epsilon;
  }
  return normalized(out);
}

std::string_view to_string(PurificationKind k) {
  switch (k) {
    case PurificationKind::single_round: return "single_round";
    case PurificationKind::symmetric_nested: return "symmetric_nested";
    case PurificationKind::pumping: return "pumping";
  }
  return "?";
}

std::optional<PurificationKind> parse_purification_kind(std::string_view s) {
  if (s == "single_round") return PurificationKind::single_round;
  if (s == "symmetric_nested" || s == "symmetric") return PurificationKind::symmetric_nested;
  if (s == "pumping") return PurificationKind::pumping;
  return std::nullopt;
}

void PurificationPolicy::validate() const {
  if (rounds && *rounds < 0) {
    throw std::invalid_argument("purification rounds must be >= 0");
  }
  if (kind == PurificationKind::single_round && rounds && *rounds > 1) {
    throw std::invalid_argument("single_round policy allows at most one round");
  }
  if (target_fidelity && !(*target_fidelity > 0.5 && *target_fidelity <= 1.0)) {
    throw std::invalid_argument("target fidelity must lie in (1/2, 1]");
  }
  if (!rounds && !target_fidelity) {
    throw std::invalid_argument("purification policy needs rounds or a target fidelity");
  }
}

}  // namespace qubus
