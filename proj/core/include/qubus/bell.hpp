#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace qubus {

enum class Bell : std::uint8_t { phi_plus = 0, phi_minus = 1, psi_plus = 2, psi_minus = 3 };

std::string_view to_string(Bell b);

/// Two-qubit state diagonal in the Bell basis. The target state is Phi-,
/// which is what the qubus link heralds.
class BellMixture {
 public:
  /// Uniform (maximally mixed) state.
  BellMixture();

  /// Throws std::invalid_argument unless all coefficients lie in [0, 1] and
  /// sum to 1 within 1e-12.
  BellMixture(double phi_plus, double phi_minus, double psi_plus, double psi_minus);

  static BellMixture pure(Bell b);
  static BellMixture uniform() { return BellMixture{}; }

  /// F on Phi-, 1 - F on Phi+.
  static BellMixture dephased(double fidelity);

  double operator[](Bell b) const { return p_[static_cast<std::size_t>(b)]; }
  const std::array<double, 4>& coefficients() const { return p_; }

  /// Overlap with the target Bell state Phi-.
  double fidelity() const { return (*this)[Bell::phi_minus]; }

  /// True when the Psi components vanish (within `tol`).
  bool rank_two(double tol = 1e-15) const;

  double max_abs_difference(const BellMixture& other) const;

  friend bool operator==(const BellMixture&, const BellMixture&) = default;

 private:
  std::array<double, 4> p_;
};

/// Symmetric two-qubit depolarizing weight applied once per local C-Z.
struct GateErrorModel {
  double epsilon = 0.001;

  static GateErrorModel ideal() { return GateErrorModel{0.0}; }
  void validate() const;
};

struct PurificationResult {
  double success_probability;
  BellMixture state;
};

/// One recurrence round on two Bell-diagonal pairs: bilateral Hadamard,
/// bilateral CNOT (first pair is the control), Z-basis comparison of the
/// second pair, Hadamard back. For F/(1-F) mixtures on Phi-/Phi+ this yields
/// F' = F^2 / (F^2 + (1-F)^2) with probability F^2 + (1-F)^2.
/// Depolarizing noise acts on both local C-Z gates.
PurificationResult purify(const BellMixture& a, const BellMixture& b,
                          const GateErrorModel& err = GateErrorModel::ideal());

/// Entanglement swapping via a Bell measurement at the shared station, with
/// Pauli correction into the Phi- frame. The output is deterministic.
BellMixture swap(const BellMixture& a, const BellMixture& b,
                 const GateErrorModel& err = GateErrorModel::ideal());

/// Bilateral local Cliffords permute the three error states (Phi+, Psi+,
/// Psi-) of both pairs freely. The recurrence catches two of them, so before
/// each round the stations pick the relabelling with the best output
/// fidelity. Identity wins ties, so rank-2 inputs go through unchanged.
/// The returned state stays in the rotated frame.
PurificationResult purify_adaptive(const BellMixture& a, const BellMixture& b,
                                   const GateErrorModel& err = GateErrorModel::ideal());

/// Relabels the error states: coefficient at `order[k]` moves to slot k of
/// (Phi+, Psi+, Psi-). `order` must be a permutation of those three.
BellMixture permute_errors(const BellMixture& s, const std::array<Bell, 3>& order);

/// (1 - epsilon) * s + epsilon * uniform.
BellMixture apply_gate_error(const BellMixture& s, const GateErrorModel& err);

enum class PurificationKind { single_round, symmetric_nested, pumping };

std::string_view to_string(PurificationKind k);
std::optional<PurificationKind> parse_purification_kind(std::string_view s);

/// How base pairs are combined before use. Either a fixed number of rounds,
/// a target fidelity (rounds chosen as the fewest that reach it), or both
/// (the fixed rounds must reach the target).
struct PurificationPolicy {
  PurificationKind kind = PurificationKind::symmetric_nested;
  std::optional<int> rounds;
  std::optional<double> target_fidelity;

  static PurificationPolicy direct() { return {PurificationKind::symmetric_nested, 0, std::nullopt}; }
  static PurificationPolicy single_round() { return {PurificationKind::single_round, 1, std::nullopt}; }
  static PurificationPolicy symmetric(int rounds) {
    return {PurificationKind::symmetric_nested, rounds, std::nullopt};
  }
  static PurificationPolicy pumping(int rounds) { return {PurificationKind::pumping, rounds, std::nullopt}; }

  void validate() const;
};

/// Rounds cap used when the policy only names a target fidelity.
inline constexpr int kMaxPurificationRounds = 16;

}  // namespace qubus
