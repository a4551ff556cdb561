#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "qubus/bell.hpp"
#include "qubus/bell_oracle.hpp"

using namespace qubus;

namespace {

BellMixture random_mixture(std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  double p[4];
  double s = 0.0;
  for (double& x : p) s += (x = e(rng));
  return BellMixture(p[0] / s, p[1] / s, p[2] / s, p[3] / s);
}

void expect_purify_matches(const BellMixture& a, const BellMixture& b, const GateErrorModel& err,
                           double tol) {
  const auto closed = purify(a, b, err);
  const auto oracle = brute_force_two_pair(a, b, TwoPairOperation::purify, err);
  EXPECT_NEAR(closed.success_probability, oracle.success_probability, tol);
  EXPECT_NEAR(oracle.success_probability + oracle.failure_probability, 1.0, 1e-12);
  EXPECT_LT(closed.state.max_abs_difference(oracle.state), tol);
  EXPECT_LT(oracle.off_diagonal, 1e-12);
}

void expect_swap_matches(const BellMixture& a, const BellMixture& b, const GateErrorModel& err,
                         double tol) {
  const auto oracle = brute_force_two_pair(a, b, TwoPairOperation::swap, err);
  EXPECT_NEAR(oracle.success_probability, 1.0, 1e-12);
  EXPECT_LT(swap(a, b, err).max_abs_difference(oracle.state), tol);
  EXPECT_LT(oracle.off_diagonal, 1e-12);
}

}  // namespace

TEST(BellOracle, RandomPairsIdeal) {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_mixture(rng), b = random_mixture(rng);
    expect_purify_matches(a, b, GateErrorModel::ideal(), 1e-12);
    expect_swap_matches(a, b, GateErrorModel::ideal(), 1e-12);
  }
}

TEST(BellOracle, RandomPairsWithGateError) {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> eps(0.0, 0.1);
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_mixture(rng), b = random_mixture(rng);
    const GateErrorModel err{i % 2 == 0 ? 0.001 : eps(rng)};
    expect_purify_matches(a, b, err, 1e-10);
    expect_swap_matches(a, b, err, 1e-10);
  }
}

TEST(BellOracle, RankTwoGrid) {
  for (int i = 50; i <= 100; ++i) {
    for (int j = 50; j <= 100; ++j) {
      const auto a = BellMixture::dephased(i / 100.0), b = BellMixture::dephased(j / 100.0);
      expect_purify_matches(a, b, GateErrorModel::ideal(), 1e-12);
      expect_swap_matches(a, b, GateErrorModel::ideal(), 1e-12);
      const auto p = brute_force_two_pair(a, b, TwoPairOperation::purify);
      EXPECT_TRUE(p.state.rank_two(1e-14));
      const auto s = brute_force_two_pair(a, b, TwoPairOperation::swap).state;
      EXPECT_TRUE(s.rank_two(1e-14));
      EXPECT_LE(s.fidelity(), std::min(i, j) / 100.0 + 1e-15);
      if (i == j && i > 50 && i < 100) {
        EXPECT_GT(p.state.fidelity(), i / 100.0);
      }
    }
  }
}

TEST(BellOracle, PurifyAtNinety) {
  const auto a = BellMixture::dephased(0.9);
  const auto r = brute_force_two_pair(a, a, TwoPairOperation::purify);
  EXPECT_NEAR(r.state.fidelity(), 0.81 / 0.82, 1e-12);
  EXPECT_NEAR(r.success_probability, 0.82, 1e-12);
}

TEST(BellOracle, MaximallyMixed) {
  const auto u = BellMixture::uniform();
  const auto p = brute_force_two_pair(u, u, TwoPairOperation::purify);
  EXPECT_NEAR(p.success_probability, 0.5, 1e-12);
  EXPECT_LT(p.state.max_abs_difference(u), 1e-12);
  EXPECT_LT(brute_force_two_pair(u, u, TwoPairOperation::swap).state.max_abs_difference(u), 1e-12);
}

TEST(BellOracle, PureSwapsLandOnTarget) {
  // Corrections are applied toward Phi-, so two identical pure pairs always
  // come out as Phi-.
  for (Bell b : {Bell::phi_plus, Bell::phi_minus, Bell::psi_plus, Bell::psi_minus}) {
    const auto p = BellMixture::pure(b);
    EXPECT_NEAR(brute_force_two_pair(p, p, TwoPairOperation::swap).state.fidelity(), 1.0, 1e-12);
    EXPECT_NEAR(swap(p, p).fidelity(), 1.0, 1e-15);
  }
  const auto p = BellMixture::pure(Bell::phi_minus);
  EXPECT_NEAR(swap(p, BellMixture::pure(Bell::phi_plus))[Bell::phi_plus], 1.0, 1e-15);
}
