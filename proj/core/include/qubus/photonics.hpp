#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qubus/bell.hpp"

namespace qubus {

/// Channel attenuation in units of the attenuation length, l/l0.
class Attenuation {
 public:
  /// Throws DomainError unless ratio is finite and >= 0.
  explicit Attenuation(double ratio);

  static Attenuation from_km(double length_km, double attenuation_length_km);

  double ratio() const noexcept { return ratio_; }
  /// t = exp(-l/l0)
  double transmittance() const noexcept { return transmittance_; }
  bool lossless() const noexcept { return ratio_ == 0.0; }

 private:
  double ratio_;
  double transmittance_;
};

/// Attenuation length for a fiber loss figure in dB/km.
double attenuation_length_km(double loss_db_per_km);

enum class Strategy { csp, spd };

std::string_view to_string(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view s);

struct ProbeSummary {
  double gamma_bar;      ///< 2 beta^2 (1 - t)
  double mixing_weight;  ///< (1 + exp(-gamma_bar / 2)) / 2
  double n_plus;         ///< 1 + exp(-8 beta^2 t)
  double n_minus;        ///< 1 - exp(-8 beta^2 t)
  double overlap_c0;     ///< <c+|0>
};

ProbeSummary probe_summary(double beta, Attenuation att);

/// F = (1 + exp(-gamma_bar / 2)) / 2. Throws DegenerateChannel on a lossless
/// channel, where F is 1 for every beta.
double fidelity_from_beta(double beta, Attenuation att);

/// Inverse of fidelity_from_beta. F = 1 gives exactly 0.
double beta_from_fidelity(double fidelity, Attenuation att);

enum class ChannelLimit {
  reject,  ///< throw DegenerateChannel at l/l0 = 0
  allow,   ///< return the l/l0 -> 0 limit
};

/// Cat-state projector heralding probability,
/// 1/4 * (1 - (2F - 1)^(8t / (1 - t))).
double p_csp(double fidelity, Attenuation att, ChannelLimit limit = ChannelLimit::reject);

/// Exponent c = 4 eta^2 t / (1 + (7 - 8 eta^2) t) of the photon-detection herald.
double spd_exponent(Attenuation att, double eta_sq);

/// Single-photon-detection heralding probability,
/// 1/2 * c * (2F - 1)^c * ln(1 / (2F - 1)).
/// This is the magnitude of the lambda-derivative form; the signed derivative
/// is negative for F < 1.
double p_spd(double fidelity, Attenuation att, double eta_sq);

/// Two-qubit state heralded by either strategy: F on Phi-, 1 - F on Phi+.
BellMixture conditioned_state(double fidelity);

/// Link operating point. Fidelity and probe amplitude are two views of the
/// same knob; whichever is given, the other is derived.
class LinkParams {
 public:
  static LinkParams from_fidelity(Attenuation att, double eta_sq, double fidelity,
                                  Strategy strategy = Strategy::spd);
  static LinkParams from_beta(Attenuation att, double eta_sq, double beta,
                              Strategy strategy = Strategy::spd);

  const Attenuation& attenuation() const noexcept { return att_; }
  double eta_sq() const noexcept { return eta_sq_; }
  double fidelity() const noexcept { return fidelity_; }
  double beta() const noexcept { return beta_; }
  Strategy strategy() const noexcept { return strategy_; }

  /// Heralded success probability for the chosen strategy.
  double success_probability() const;
  BellMixture heralded_state() const { return conditioned_state(fidelity_); }

 private:
  LinkParams(Attenuation att, double eta_sq, double fidelity, double beta, Strategy s)
      : att_(att), eta_sq_(eta_sq), fidelity_(fidelity), beta_(beta), strategy_(s) {}

  Attenuation att_;
  double eta_sq_;
  double fidelity_;
  double beta_;
  Strategy strategy_;
};

struct LinkCurveRow {
  double fidelity;
  double p_csp;
  double p_spd;
};

/// Uniform grid on [0.5, 1.0].
std::vector<double> default_fidelity_grid(std::size_t points = 101);

/// Grid values must lie in [1/2, 1].
std::vector<LinkCurveRow> link_curve(Attenuation att, double eta_sq, std::span<const double> grid);

/// Header `F,p_csp,p_spd`, one row per point, 6 significant digits.
void write_link_curve_csv(std::ostream& os, std::span<const LinkCurveRow> rows);

}  // namespace qubus
