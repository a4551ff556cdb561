#include "qubus/photonics.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "qubus/errors.hpp"

namespace qubus {

namespace {

void require_fidelity(double fidelity) {
  if (!(fidelity >= 0.5 && fidelity <= 1.0)) {
    throw DomainError("fidelity " + std::to_string(fidelity) + " outside [1/2, 1]");
  }
}

void require_efficiency(double eta_sq) {
  if (!(eta_sq > 0.0 && eta_sq <= 1.0)) {
    throw DomainError("detector efficiency eta^2 must lie in (0, 1]");
  }
}

}  // namespace

Attenuation::Attenuation(double ratio) : ratio_(ratio), transmittance_(std::exp(-ratio)) {
  if (!std::isfinite(ratio) || ratio < 0.0) {
    throw DomainError("attenuation ratio l/l0 must be finite and >= 0");
  }
}

Attenuation Attenuation::from_km(double length_km, double attenuation_length_km) {
  if (!(attenuation_length_km > 0.0)) {
    throw DomainError("attenuation length must be > 0");
  }
  return Attenuation(length_km / attenuation_length_km);
}

double attenuation_length_km(double loss_db_per_km) {
  if (!(loss_db_per_km > 0.0)) {
    throw DomainError("fiber loss must be > 0 dB/km");
  }
  // Power falls by 1/e over l0: 10 log10(e) dB.
  return 10.0 / (loss_db_per_km * std::log(10.0));
}

std::string_view to_string(Strategy s) {
  return s == Strategy::csp ? "csp" : "spd";
}

std::optional<Strategy> parse_strategy(std::string_view s) {
  if (s == "csp") return Strategy::csp;
  if (s == "spd") return Strategy::spd;
  return std::nullopt;
}

ProbeSummary probe_summary(double beta, Attenuation att) {
  if (!(beta >= 0.0)) {
    throw DomainError("probe amplitude must be >= 0");
  }
  const double t = att.transmittance();
  const double b2 = beta * beta;
  const double gamma_bar = 2.0 * b2 * (1.0 - t);
  const double cat = std::exp(-8.0 * b2 * t);

  ProbeSummary s{};
  s.gamma_bar = gamma_bar;
  s.mixing_weight = 0.5 * (1.0 + std::exp(-0.5 * gamma_bar));
  s.n_plus = 1.0 + cat;
  s.n_minus = -std::expm1(-8.0 * b2 * t);
  s.overlap_c0 = 2.0 * std::exp(-4.0 * b2 * t) / (1.0 + cat);
  return s;
}

double fidelity_from_beta(double beta, Attenuation att) {
  if (att.lossless()) {
    throw DegenerateChannel();
  }
  return probe_summary(beta, att).mixing_weight;
}

double beta_from_fidelity(double fidelity, Attenuation att) {
  if (att.lossless()) {
    throw DegenerateChannel();
  }
  if (!(fidelity > 0.5 && fidelity <= 1.0)) {
    throw DomainError("fidelity must lie in (1/2, 1] to invert the probe amplitude");
  }
  if (fidelity == 1.0) {
    return 0.0;
  }
  // exp(-gamma_bar/2) = 2F - 1 with gamma_bar = 2 beta^2 (1 - t)
  const double beta_sq = -std::log(2.0 * fidelity - 1.0) / -std::expm1(-att.ratio());
  return std::sqrt(beta_sq);
}

double p_csp(double fidelity, Attenuation att, ChannelLimit limit) {
  require_fidelity(fidelity);
  if (att.lossless()) {
    if (limit == ChannelLimit::reject) {
      throw DegenerateChannel();
    }
    return fidelity == 1.0 ? 0.0 : 0.25;
  }
  const double t = att.transmittance();
  const double exponent = 8.0 * t / -std::expm1(-att.ratio());
  return 0.25 * (1.0 - std::pow(2.0 * fidelity - 1.0, exponent));
}

double spd_exponent(Attenuation att, double eta_sq) {
  require_efficiency(eta_sq);
  const double t = att.transmittance();
  return 4.0 * eta_sq * t / (1.0 + (7.0 - 8.0 * eta_sq) * t);
}

double p_spd(double fidelity, Attenuation att, double eta_sq) {
  require_fidelity(fidelity);
  if (att.lossless()) {
    throw DegenerateChannel();
  }
  if (fidelity == 0.5 || fidelity == 1.0) {
    return 0.0;
  }
  const double c = spd_exponent(att, eta_sq);
  const double x = 2.0 * fidelity - 1.0;
  return 0.5 * c * std::pow(x, c) * -std::log(x);
}

BellMixture conditioned_state(double fidelity) {
  require_fidelity(fidelity);
  return BellMixture::dephased(fidelity);
}

LinkParams LinkParams::from_fidelity(Attenuation att, double eta_sq, double fidelity,
                                     Strategy strategy) {
  require_efficiency(eta_sq);
  return LinkParams(att, eta_sq, fidelity, beta_from_fidelity(fidelity, att), strategy);
}

LinkParams LinkParams::from_beta(Attenuation att, double eta_sq, double beta, Strategy strategy) {
  require_efficiency(eta_sq);
  return LinkParams(att, eta_sq, fidelity_from_beta(beta, att), beta, strategy);
}

double LinkParams::success_probability() const {
  return strategy_ == Strategy::csp ? p_csp(fidelity_, att_) : p_spd(fidelity_, att_, eta_sq_);
}

std::vector<double> default_fidelity_grid(std::size_t points) {
  if (points < 2) {
    throw DomainError("fidelity grid needs at least two points");
  }
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = 0.5 + 0.5 * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return grid;
}

std::vector<LinkCurveRow> link_curve(Attenuation att, double eta_sq, std::span<const double> grid) {
  std::vector<LinkCurveRow> rows;
  rows.reserve(grid.size());
  for (double f : grid) {
    rows.push_back({f, p_csp(f, att), p_spd(f, att, eta_sq)});
  }
  return rows;
}

void write_link_curve_csv(std::ostream& os, std::span<const LinkCurveRow> rows) {
  os << "F,p_csp,p_spd\n";
  char buf[96];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.6g,%.6g,%.6g\n", r.fidelity, r.p_csp, r.p_spd);
    os << buf;
  }
}

}  // namespace qubus
