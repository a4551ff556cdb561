#include "qubus/bell_oracle.hpp"

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <initializer_list>

namespace qubus {

namespace {

using Mat2 = Eigen::Matrix2d;
using Mat4 = Eigen::Matrix4d;
using Mat16 = Eigen::Matrix<double, 16, 16>;

// Qubit q occupies bit (3 - q) of the basis index: A1, B1, A2, B2.
constexpr int kA1 = 0;
constexpr int kB1 = 1;
constexpr int kA2 = 2;
constexpr int kB2 = 3;

int bit(int index, int qubit) { return (index >> (3 - qubit)) & 1; }

std::array<Eigen::Vector4d, 4> bell_vectors() {
  const double s = 1.0 / std::sqrt(2.0);
  return {Eigen::Vector4d(s, 0, 0, s), Eigen::Vector4d(s, 0, 0, -s), Eigen::Vector4d(0, s, s, 0),
          Eigen::Vector4d(0, s, -s, 0)};
}

Mat4 pair_density(const BellMixture& m) {
  const auto v = bell_vectors();
  Mat4 rho = Mat4::Zero();
  for (std::size_t k = 0; k < 4; ++k) {
    rho += m.coefficients()[k] * v[k] * v[k].transpose();
  }
  return rho;
}

Mat16 kron(const Mat4& a, const Mat4& b) {
  Mat16 out;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      out.block<4, 4>(4 * i, 4 * j) = a(i, j) * b;
    }
  }
  return out;
}

Mat16 embed(const Mat2& u, int qubit) {
  Mat16 out = Mat16::Zero();
  const int mask = 1 << (3 - qubit);
  for (int r = 0; r < 16; ++r) {
    for (int c = 0; c < 16; ++c) {
      if ((r & ~mask) == (c & ~mask)) {
        out(r, c) = u(bit(r, qubit), bit(c, qubit));
      }
    }
  }
  return out;
}

void apply(Mat16& rho, const Mat16& u) { rho = u * rho * u.transpose(); }

void apply(Mat16& rho, const Mat2& u, int qubit) { apply(rho, embed(u, qubit)); }

void apply_cz(Mat16& rho, int qa, int qb) {
  Mat16 u = Mat16::Zero();
  for (int r = 0; r < 16; ++r) {
    u(r, r) = (bit(r, qa) & bit(r, qb)) ? -1.0 : 1.0;
  }
  apply(rho, u);
}

// (1 - eps) rho + eps * (I/4 on qa, qb) (x) Tr_{qa,qb} rho
void depolarize(Mat16& rho, int qa, int qb, double eps) {
  if (eps == 0.0) {
    return;
  }
  const int mask = (1 << (3 - qa)) | (1 << (3 - qb));
  Mat16 mixed = Mat16::Zero();
  for (int r = 0; r < 16; ++r) {
    for (int c = 0; c < 16; ++c) {
      if ((r & mask) != (c & mask)) {
        continue;
      }
      double acc = 0.0;
      for (int k = 0; k < 16; ++k) {
        if ((k & ~mask) != 0) {
          continue;
        }
        acc += rho((r & ~mask) | k, (c & ~mask) | k);
      }
      mixed(r, c) = 0.25 * acc;
    }
  }
  rho = (1.0 - eps) * rho + eps * mixed;
}

void apply_cnot(Mat16& rho, int control, int target, const Mat2& h) {
  apply(rho, h, target);
  apply_cz(rho, control, target);
  apply(rho, h, target);
}

// Project qubits qa, qb onto |ma mb>.
Mat16 project(const Mat16& rho, int qa, int ma, int qb, int mb) {
  Mat16 out = rho;
  for (int r = 0; r < 16; ++r) {
    const bool keep = bit(r, qa) == ma && bit(r, qb) == mb;
    if (!keep) {
      out.row(r).setZero();
      out.col(r).setZero();
    }
  }
  return out;
}

// Reduced state on two kept qubits (first one is the high bit).
Mat4 reduce(const Mat16& rho, int keep_hi, int keep_lo) {
  Mat4 out = Mat4::Zero();
  for (int r = 0; r < 16; ++r) {
    for (int c = 0; c < 16; ++c) {
      bool traced_equal = true;
      for (int q = 0; q < 4; ++q) {
        if (q != keep_hi && q != keep_lo && bit(r, q) != bit(c, q)) {
          traced_equal = false;
        }
      }
      if (!traced_equal) {
        continue;
      }
      const int rr = (bit(r, keep_hi) << 1) | bit(r, keep_lo);
      const int cc = (bit(c, keep_hi) << 1) | bit(c, keep_lo);
      out(rr, cc) += rho(r, c);
    }
  }
  return out;
}

TwoPairOracleResult to_result(const Mat4& rho_unnormalized, double success, double failure) {
  const auto v = bell_vectors();
  const Mat4 rho = rho_unnormalized / success;
  Eigen::Matrix4d bell_basis;
  for (int k = 0; k < 4; ++k) {
    bell_basis.col(k) = v[k];
  }
  const Mat4 in_bell = bell_basis.transpose() * rho * bell_basis;
  double off = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i != j) {
        off = std::max(off, std::abs(in_bell(i, j)));
      }
    }
  }
  std::array<double, 4> p{};
  double sum = 0.0;
  for (int k = 0; k < 4; ++k) {
    p[k] = std::max(0.0, in_bell(k, k));
    sum += p[k];
  }
  for (double& x : p) {
    x /= sum;
  }
  return {success, failure, BellMixture(p[0], p[1], p[2], p[3]), off};
}

}  // namespace

TwoPairOracleResult brute_force_two_pair(const BellMixture& a, const BellMixture& b,
                                         TwoPairOperation op, const GateErrorModel& err) {
  err.validate();
  const double s = 1.0 / std::sqrt(2.0);
  Mat2 h;
  h << s, s, s, -s;
  Mat2 x;
  x << 0, 1, 1, 0;
  Mat2 z;
  z << 1, 0, 0, -1;

  Mat16 rho = kron(pair_density(a), pair_density(b));

  if (op == TwoPairOperation::purify) {
    for (int q : {kA1, kB1, kA2, kB2}) {
      apply(rho, h, q);
    }
    apply_cnot(rho, kA1, kA2, h);
    depolarize(rho, kA1, kA2, err.epsilon);
    apply_cnot(rho, kB1, kB2, h);
    depolarize(rho, kB1, kB2, err.epsilon);

    Mat16 accepted = Mat16::Zero();
    double failure = 0.0;
    for (int ma = 0; ma < 2; ++ma) {
      for (int mb = 0; mb < 2; ++mb) {
        const Mat16 branch = project(rho, kA2, ma, kB2, mb);
        if (ma == mb) {
          accepted += branch;
        } else {
          failure += branch.trace();
        }
      }
    }
    apply(accepted, h, kA1);
    apply(accepted, h, kB1);
    const double success = accepted.trace();
    if (success <= 0.0) {
      return {0.0, failure, BellMixture::uniform(), 0.0};
    }
    return to_result(reduce(accepted, kA1, kB1), success, failure);
  }

  // Bell measurement on (B1, A2), corrections on B2.
  apply_cnot(rho, kB1, kA2, h);
  depolarize(rho, kB1, kA2, err.epsilon);
  apply(rho, h, kB1);

  Mat16 corrected = Mat16::Zero();
  for (int m1 = 0; m1 < 2; ++m1) {
    for (int m2 = 0; m2 < 2; ++m2) {
      Mat16 branch = project(rho, kB1, m1, kA2, m2);
      if (m2) apply(branch, x, kB2);
      if (m1) apply(branch, z, kB2);
      apply(branch, z, kB2);  // Phi- frame
      corrected += branch;
    }
  }
  return to_result(reduce(corrected, kA1, kB2), corrected.trace(), 0.0);
}

}  // namespace qubus
