#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "qubus/bell.hpp"

/// Truncated Fock-space model of two qubits sharing one bosonic probe mode.
/// Slow and exact; used to check the closed-form link model.
namespace qubus::cv {

using Complex = std::complex<double>;

inline constexpr int kDefaultCutoff = 64;

/// Largest population allowed at the top Fock level.
inline constexpr double kLeakageLimit = 1e-10;

enum class Qubit { a = 0, b = 1 };

/// Pure state over (qubit A) x (qubit B) x (Fock 0..n_max). Basis index is
/// (2a + b) * (n_max + 1) + n.
class PureState {
 public:
  explicit PureState(int n_max = kDefaultCutoff);

  /// |qa qb>|0> for computational-basis qubits, or (|0>+|1>)/sqrt2 on each
  /// qubit with `plus`.
  static PureState vacuum(int qa, int qb, int n_max = kDefaultCutoff);
  static PureState plus_plus_vacuum(int n_max = kDefaultCutoff);

  int n_max() const noexcept { return n_max_; }
  int dim() const noexcept { return 4 * (n_max_ + 1); }

  Complex& operator()(int qa, int qb, int n) { return amp_[index(qa, qb, n)]; }
  Complex operator()(int qa, int qb, int n) const { return amp_[index(qa, qb, n)]; }

  const Eigen::VectorXcd& amplitudes() const noexcept { return amp_; }
  Eigen::VectorXcd& amplitudes() noexcept { return amp_; }

  double norm_squared() const { return amp_.squaredNorm(); }
  /// Population in the n = n_max level.
  double top_population() const;

 private:
  int index(int qa, int qb, int n) const { return (2 * qa + qb) * (n_max_ + 1) + n; }

  int n_max_;
  Eigen::VectorXcd amp_;
};

/// Convex combination of normalized pure states.
struct MixedState {
  std::vector<std::pair<double, PureState>> components;

  int n_max() const { return components.front().second.n_max(); }
  double trace() const;
  double top_population() const;
  Eigen::MatrixXcd density() const;
  /// Two-qubit density matrix, mode traced out. Basis |qa qb>.
  Eigen::Matrix4cd qubit_density() const;
};

MixedState as_mixed(PureState s);

struct LossChannel {
  double transmittance;

  explicit LossChannel(double t);
  static LossChannel from_ratio(double ratio);
};

/// Matrix of D(alpha) = exp(alpha a^dag - conj(alpha) a) on the truncated space.
Eigen::MatrixXcd displacement(Complex alpha, int n_max);

/// Fock amplitudes of the coherent state |alpha>.
Eigen::VectorXcd coherent(Complex alpha, int n_max);

/// D(beta sigma_z) on the mode, controlled by `target`: +beta on |0>, -beta
/// on |1>. Throws InsufficientTruncation when the result leaks into n_max.
PureState controlled_displacement(const PureState& s, Qubit target, Complex beta);
MixedState controlled_displacement(const MixedState& s, Qubit target, Complex beta);

/// Pure-loss channel as the Kraus sum over lost photon number k,
/// K_k |n> = sqrt(C(n,k) t^(n-k) (1-t)^k) |n-k>.
MixedState apply_loss(const MixedState& s, LossChannel ch);

/// Qubit A in |+>, D(beta sigma_z) on the vacuum probe, then loss. Returns
/// the loss-induced factor on the coherence between |0>|beta sqrt t> and
/// |1>|-beta sqrt t>; 1 when t = 1.
double loss_dephasing_factor(double beta, LossChannel ch, int n_max = kDefaultCutoff);

/// Both qubits in |+>, vacuum probe; D(beta sigma_z1), loss, then
/// D(beta sqrt(t) sigma_z2).
MixedState build_protocol_state(double beta, LossChannel ch, int n_max = kDefaultCutoff);

/// Joint state written as w |Z+><Z+| + (1 - w) |Z-><Z-| with
/// |Z+-> = sqrt(N+-)/2 |Phi+>|c+-> + sqrt(N-+)/2 |Phi->|c-+> + |Psi+->|0>/sqrt2
/// and cat amplitude 2 beta sqrt(t).
MixedState z_decomposition_state(double beta, LossChannel ch, double mixing_weight,
                                 int n_max = kDefaultCutoff);

/// Frobenius norm of the difference of two joint density matrices.
double density_distance(const MixedState& x, const MixedState& y);

struct CatProjection {
  double probability;
  std::optional<BellMixture> state;  ///< empty when probability is 0
  Eigen::Matrix4cd density;          ///< post-measurement two-qubit state
};

/// Projects the probe onto the odd cat state |c-> with amplitude
/// `cat_amplitude` (2 beta sqrt(t) for the protocol state).
CatProjection measure_cat_projection(const MixedState& s, double cat_amplitude);

/// Two-qubit density matrix of a Bell mixture in the |qa qb> basis.
Eigen::Matrix4cd bell_density(const BellMixture& m);

/// 1/2 * sum |eigenvalues(x - y)|.
double trace_distance(const Eigen::Matrix4cd& x, const Eigen::Matrix4cd& y);

/// exp(i theta sigma_z (x) sigma_z), diagonal in |qa qb>.
Eigen::Matrix4cd zz_phase_gate(double theta);

/// min_phi ||u - e^{i phi} v|| in the spectral norm.
double distance_up_to_phase(const Eigen::Matrix4cd& u, const Eigen::Matrix4cd& v);

struct CzCheck {
  Eigen::Matrix4cd gate;  ///< <qa qb, vac| sequence |qa' qb', vac>
  double distance;        ///< distance_up_to_phase(gate, zz_phase_gate(pi/4))
  double bus_leakage;     ///< max over basis inputs of 1 - |<vac|mode out>|^2
};

/// D(i b2 sz2) D(b1 sz1) D(-i b2 sz2) D(-b1 sz1) on a vacuum bus.
CzCheck qubus_cz_check(double beta1, double beta2, int n_max = kDefaultCutoff);

}  // namespace qubus::cv
