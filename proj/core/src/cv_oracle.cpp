#include "qubus/cv_oracle.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "qubus/errors.hpp"

namespace qubus::cv {

namespace {

constexpr Complex kI{0.0, 1.0};

void check_leakage(double top, int n_max) {
  if (top > kLeakageLimit) {
    throw InsufficientTruncation(top, n_max);
  }
}

Eigen::VectorXcd mode_slice(const PureState& s, int qa, int qb) {
  const int d = s.n_max() + 1;
  return s.amplitudes().segment((2 * qa + qb) * d, d);
}

void set_mode_slice(PureState& s, int qa, int qb, const Eigen::VectorXcd& v) {
  const int d = s.n_max() + 1;
  s.amplitudes().segment((2 * qa + qb) * d, d) = v;
}

// Bell vectors in the |qa qb> basis.
std::array<Eigen::Vector4cd, 4> bell_kets() {
  const double s = 1.0 / std::sqrt(2.0);
  std::array<Eigen::Vector4cd, 4> v;
  v[0] << s, 0, 0, s;
  v[1] << s, 0, 0, -s;
  v[2] << 0, s, s, 0;
  v[3] << 0, s, -s, 0;
  return v;
}

BellMixture bell_diagonal(const Eigen::Matrix4cd& rho) {
  const auto v = bell_kets();
  std::array<double, 4> p{};
  double sum = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    p[k] = std::max(0.0, (v[k].adjoint() * rho * v[k])(0, 0).real());
    sum += p[k];
  }
  for (double& x : p) {
    x /= sum;
  }
  return BellMixture(p[0], p[1], p[2], p[3]);
}

// (|alpha> + sign |-alpha>) / sqrt(2 (1 + sign e^{-2|alpha|^2}))
Eigen::VectorXcd cat(double alpha, int sign, int n_max) {
  Eigen::VectorXcd v = coherent(alpha, n_max) + double(sign) * coherent(-alpha, n_max);
  const double n = v.norm();
  if (n < 1e-150) {
    return Eigen::VectorXcd::Zero(n_max + 1);
  }
  return v / n;
}

}  // namespace

PureState::PureState(int n_max) : n_max_(n_max), amp_(Eigen::VectorXcd::Zero(4 * (n_max + 1))) {
  if (n_max < 1) {
    throw std::invalid_argument("Fock cutoff must be >= 1");
  }
}

PureState PureState::vacuum(int qa, int qb, int n_max) {
  PureState s(n_max);
  s(qa, qb, 0) = 1.0;
  return s;
}

PureState PureState::plus_plus_vacuum(int n_max) {
  PureState s(n_max);
  for (int qa = 0; qa < 2; ++qa) {
    for (int qb = 0; qb < 2; ++qb) {
      s(qa, qb, 0) = 0.5;
    }
  }
  return s;
}

double PureState::top_population() const {
  double p = 0.0;
  for (int q = 0; q < 4; ++q) {
    p += std::norm(amp_[q * (n_max_ + 1) + n_max_]);
  }
  return p;
}

double MixedState::trace() const {
  double t = 0.0;
  for (const auto& [w, s] : components) {
    t += w * s.norm_squared();
  }
  return t;
}

double MixedState::top_population() const {
  double p = 0.0;
  for (const auto& [w, s] : components) {
    p += w * s.top_population();
  }
  return p;
}

Eigen::MatrixXcd MixedState::density() const {
  const int d = components.front().second.dim();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& [w, s] : components) {
    rho.noalias() += w * s.amplitudes() * s.amplitudes().adjoint();
  }
  return rho;
}

Eigen::Matrix4cd MixedState::qubit_density() const {
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (const auto& [w, s] : components) {
    for (int r = 0; r < 4; ++r) {
      const auto vr = mode_slice(s, r / 2, r % 2);
      for (int c = 0; c < 4; ++c) {
        const auto vc = mode_slice(s, c / 2, c % 2);
        rho(r, c) += w * vc.dot(vr);  // sum_n psi_r(n) conj(psi_c(n))
      }
    }
  }
  return rho;
}

MixedState as_mixed(PureState s) {
  MixedState m;
  m.components.emplace_back(1.0, std::move(s));
  return m;
}

LossChannel::LossChannel(double t) : transmittance(t) {
  if (!(t > 0.0 && t <= 1.0)) {
    throw DomainError("loss channel transmittance must lie in (0, 1]");
  }
}

LossChannel LossChannel::from_ratio(double ratio) {
  return LossChannel(std::exp(-ratio));
}

Eigen::MatrixXcd displacement(Complex alpha, int n_max) {
  const int d = n_max + 1;
  // H = i (alpha a^dag - conj(alpha) a) is Hermitian and D = exp(-i H).
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
  for (int n = 0; n + 1 < d; ++n) {
    const double s = std::sqrt(double(n + 1));
    h(n + 1, n) = kI * alpha * s;
    h(n, n + 1) = -kI * std::conj(alpha) * s;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  Eigen::VectorXcd phases(d);
  for (int k = 0; k < d; ++k) {
    phases[k] = std::exp(-kI * lambda[k]);
  }
  const Eigen::MatrixXcd& v = eig.eigenvectors();
  return v * phases.asDiagonal() * v.adjoint();
}

Eigen::VectorXcd coherent(Complex alpha, int n_max) {
  Eigen::VectorXcd v(n_max + 1);
  Complex c = std::exp(-0.5 * std::norm(alpha));
  v[0] = c;
  for (int n = 1; n <= n_max; ++n) {
    c *= alpha / std::sqrt(double(n));
    v[n] = c;
  }
  return v;
}

namespace {

PureState displace_unchecked(const PureState& s, Qubit target, Complex beta) {
  const int n_max = s.n_max();
  const Eigen::MatrixXcd plus = displacement(beta, n_max);
  const Eigen::MatrixXcd minus = displacement(-beta, n_max);
  PureState out(n_max);
  for (int qa = 0; qa < 2; ++qa) {
    for (int qb = 0; qb < 2; ++qb) {
      const int control = target == Qubit::a ? qa : qb;
      set_mode_slice(out, qa, qb, (control == 0 ? plus : minus) * mode_slice(s, qa, qb));
    }
  }
  return out;
}

}  // namespace

PureState controlled_displacement(const PureState& s, Qubit target, Complex beta) {
  PureState out = displace_unchecked(s, target, beta);
  check_leakage(out.top_population() / std::max(out.norm_squared(), 1e-300), s.n_max());
  return out;
}

// Leakage is judged on the whole mixture; loss branches with negligible
// weight may look badly truncated on their own.
MixedState controlled_displacement(const MixedState& s, Qubit target, Complex beta) {
  MixedState out;
  out.components.reserve(s.components.size());
  for (const auto& [w, c] : s.components) {
    out.components.emplace_back(w, displace_unchecked(c, target, beta));
  }
  check_leakage(out.top_population(), s.n_max());
  return out;
}

MixedState apply_loss(const MixedState& s, LossChannel ch) {
  const double t = ch.transmittance;
  if (t == 1.0) {
    return s;
  }
  check_leakage(s.top_population(), s.n_max());
  const double log_t = std::log(t);
  const double log_r = std::log1p(-t);

  MixedState out;
  for (const auto& [w, c] : s.components) {
    const int n_max = c.n_max();
    for (int k = 0; k <= n_max; ++k) {
      PureState branch(n_max);
      for (int n = k; n <= n_max; ++n) {
        const double log_coeff = 0.5 * (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) -
                                         std::lgamma(n - k + 1.0) + (n - k) * log_t + k * log_r);
        const double coeff = std::exp(log_coeff);
        for (int qa = 0; qa < 2; ++qa) {
          for (int qb = 0; qb < 2; ++qb) {
            branch(qa, qb, n - k) = coeff * c(qa, qb, n);
          }
        }
      }
      const double p = branch.norm_squared();
      if (p > 0.0) {
        branch.amplitudes() /= std::sqrt(p);
        out.components.emplace_back(w * p, std::move(branch));
      }
    }
  }
  return out;
}

double loss_dephasing_factor(double beta, LossChannel ch, int n_max) {
  PureState s(n_max);
  s(0, 0, 0) = 1.0 / std::sqrt(2.0);
  s(1, 0, 0) = 1.0 / std::sqrt(2.0);
  const MixedState m = apply_loss(as_mixed(controlled_displacement(s, Qubit::a, beta)), ch);
  const double alpha = beta * std::sqrt(ch.transmittance);
  const Eigen::VectorXcd up = coherent(alpha, n_max);
  const Eigen::VectorXcd down = coherent(-alpha, n_max);
  Complex c = 0.0;
  for (const auto& [w, comp] : m.components) {
    c += w * up.dot(mode_slice(comp, 0, 0)) * std::conj(down.dot(mode_slice(comp, 1, 0)));
  }
  return 2.0 * std::abs(c);
}

MixedState build_protocol_state(double beta, LossChannel ch, int n_max) {
  if (!(beta >= 0.0)) {
    throw DomainError("probe amplitude must be >= 0");
  }
  MixedState s = as_mixed(PureState::plus_plus_vacuum(n_max));
  s = controlled_displacement(s, Qubit::a, beta);
  s = apply_loss(s, ch);
  return controlled_displacement(s, Qubit::b, beta * std::sqrt(ch.transmittance));
}

MixedState z_decomposition_state(double beta, LossChannel ch, double mixing_weight, int n_max) {
  const double alpha = 2.0 * beta * std::sqrt(ch.transmittance);
  const double overlap = std::exp(-2.0 * alpha * alpha);
  const double n_plus = 1.0 + overlap;
  const double n_minus = -std::expm1(-2.0 * alpha * alpha);
  const Eigen::VectorXcd c_plus = cat(alpha, +1, n_max);
  const Eigen::VectorXcd c_minus = cat(alpha, -1, n_max);
  Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(n_max + 1);
  vac[0] = 1.0;

  const double s = 1.0 / std::sqrt(2.0);
  // Component on |qa qb> of each Bell ket.
  const std::array<std::array<double, 4>, 4> bell = {{
      {s, 0, 0, s},   // phi+
      {s, 0, 0, -s},  // phi-
      {0, s, s, 0},   // psi+
      {0, s, -s, 0},  // psi-
  }};

  auto build = [&](int sign) {
    PureState z(n_max);
    const double a_same = std::sqrt(sign > 0 ? n_plus : n_minus) / 2.0;
    const double a_flip = std::sqrt(sign > 0 ? n_minus : n_plus) / 2.0;
    const Eigen::VectorXcd& c_same = sign > 0 ? c_plus : c_minus;
    const Eigen::VectorXcd& c_flip = sign > 0 ? c_minus : c_plus;
    const auto& psi = sign > 0 ? bell[2] : bell[3];
    for (int q = 0; q < 4; ++q) {
      Eigen::VectorXcd v = a_same * bell[0][q] * c_same + a_flip * bell[1][q] * c_flip +
                           s * psi[q] * vac;
      set_mode_slice(z, q / 2, q % 2, v);
    }
    z.amplitudes().normalize();
    return z;
  };

  MixedState m;
  m.components.emplace_back(mixing_weight, build(+1));
  m.components.emplace_back(1.0 - mixing_weight, build(-1));
  return m;
}

double density_distance(const MixedState& x, const MixedState& y) {
  return (x.density() - y.density()).norm();
}

CatProjection measure_cat_projection(const MixedState& s, double cat_amplitude) {
  const int n_max = s.n_max();
  const double n_minus = -std::expm1(-2.0 * cat_amplitude * cat_amplitude);
  if (n_minus < 1e-300) {
    return {0.0, std::nullopt, Eigen::Matrix4cd::Zero()};
  }
  const Eigen::VectorXcd c_minus = cat(cat_amplitude, -1, n_max);

  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (const auto& [w, c] : s.components) {
    Eigen::Vector4cd m;
    for (int q = 0; q < 4; ++q) {
      m[q] = c_minus.dot(mode_slice(c, q / 2, q % 2));  // <c-|psi_q>
    }
    rho += w * m * m.adjoint();
  }
  const double p = rho.trace().real();
  if (p <= 0.0) {
    return {0.0, std::nullopt, Eigen::Matrix4cd::Zero()};
  }
  rho /= p;
  return {p, bell_diagonal(rho), rho};
}

Eigen::Matrix4cd bell_density(const BellMixture& m) {
  const auto v = bell_kets();
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (std::size_t k = 0; k < 4; ++k) {
    rho += m.coefficients()[k] * v[k] * v[k].adjoint();
  }
  return rho;
}

double trace_distance(const Eigen::Matrix4cd& x, const Eigen::Matrix4cd& y) {
  const Eigen::Matrix4cd d = x - y;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> eig(0.5 * (d + d.adjoint()));
  return 0.5 * eig.eigenvalues().cwiseAbs().sum();
}

Eigen::Matrix4cd zz_phase_gate(double theta) {
  Eigen::Matrix4cd g = Eigen::Matrix4cd::Zero();
  for (int q = 0; q < 4; ++q) {
    const int za = (q / 2) ? -1 : 1;
    const int zb = (q % 2) ? -1 : 1;
    g(q, q) = std::exp(kI * theta * double(za * zb));
  }
  return g;
}

double distance_up_to_phase(const Eigen::Matrix4cd& u, const Eigen::Matrix4cd& v) {
  const Complex overlap = (v.adjoint() * u).trace();
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex{1.0};
  Eigen::JacobiSVD<Eigen::Matrix4cd> svd(u - phase * v);
  return svd.singularValues()[0];
}

CzCheck qubus_cz_check(double beta1, double beta2, int n_max) {
  CzCheck out{Eigen::Matrix4cd::Zero(), 0.0, 0.0};
  for (int col = 0; col < 4; ++col) {
    PureState s = PureState::vacuum(col / 2, col % 2, n_max);
    s = controlled_displacement(s, Qubit::a, -beta1);
    s = controlled_displacement(s, Qubit::b, -kI * beta2);
    s = controlled_displacement(s, Qubit::a, beta1);
    s = controlled_displacement(s, Qubit::b, kI * beta2);
    double vac_pop = 0.0;
    for (int row = 0; row < 4; ++row) {
      out.gate(row, col) = s(row / 2, row % 2, 0);
      vac_pop += std::norm(out.gate(row, col));
    }
    out.bus_leakage = std::max(out.bus_leakage, 1.0 - vac_pop);
  }
  out.distance = distance_up_to_phase(out.gate, zz_phase_gate(std::numbers::pi / 4.0));
  return out;
}

}  // namespace qubus::cv
