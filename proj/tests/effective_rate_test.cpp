#include <gtest/gtest.h>

#include "oracles/reference_values.hpp"
#include "qubus/effective_rate.hpp"
#include "qubus/errors.hpp"
#include "qubus/tuning.hpp"

using namespace qubus;
namespace ref = qubus::reference;

namespace {

LinkParams link(double f) { return LinkParams::from_fidelity(Attenuation(0.8), 0.9, f); }

}  // namespace

TEST(EffectiveRate, DirectIsHeraldProbability) {
  const auto r = effective_rate(PurificationPolicy::direct(), link(0.98));
  EXPECT_EQ(r.rounds, 0);
  EXPECT_NEAR(r.p_eff, ref::kPeffDirect, 1e-14);
  EXPECT_DOUBLE_EQ(r.state.fidelity(), 0.98);
}

TEST(EffectiveRate, OneRoundHalvesAndScales) {
  const auto r = effective_rate(PurificationPolicy::single_round(), link(0.9));
  EXPECT_EQ(r.rounds, 1);
  EXPECT_NEAR(r.p_eff, ref::kPeffOneRound, 1e-14);
  EXPECT_NEAR(r.p_eff, r.base_probability * ref::kPurifyP090 / 2.0, 1e-14);
  EXPECT_NEAR(r.state.fidelity(), ref::kPurifyF090, 1e-14);
}

TEST(EffectiveRate, TwoSymmetricRounds) {
  const auto r = effective_rate(PurificationPolicy::symmetric(2), link(0.75));
  EXPECT_EQ(r.rounds, 2);
  EXPECT_NEAR(r.p_eff, ref::kPeffSymmetric, 1e-14);
}

TEST(EffectiveRate, PumpingCountsConsumedPairs) {
  const auto l = link(0.9);
  const auto r = effective_rate(PurificationPolicy::pumping(2), l);
  const auto b = l.heralded_state();
  const auto first = purify(b, b);
  const auto second = purify(first.state, b);
  EXPECT_NEAR(r.p_eff,
              l.success_probability() * first.success_probability * second.success_probability / 3.0,
              1e-15);
  EXPECT_NEAR(r.state.fidelity(), second.state.fidelity(), 1e-15);
}

TEST(EffectiveRate, TargetPicksFewestRounds) {
  PurificationPolicy p;
  p.target_fidelity = 0.98;
  EXPECT_EQ(effective_rate(p, link(0.9)).rounds, 1);
  EXPECT_EQ(effective_rate(p, link(0.75)).rounds, 2);
  EXPECT_EQ(effective_rate(p, link(0.99)).rounds, 0);
}

TEST(EffectiveRate, NearHalfIsUnreachable) {
  PurificationPolicy p{PurificationKind::single_round, 1, 0.98};
  try {
    effective_rate(p, link(0.51));
    FAIL() << "expected UnreachableTarget";
  } catch (const UnreachableTarget& e) {
    EXPECT_NE(std::string(e.what()).find("0.519992"), std::string::npos) << e.what();
  }
  const auto r = effective_rate(PurificationPolicy::single_round(), link(0.51));
  EXPECT_NEAR(r.state.fidelity(), ref::kPurifyF051, 1e-14);
}

TEST(EffectiveRate, SingleRoundCapsAtOne) {
  PurificationPolicy p{PurificationKind::single_round, std::nullopt, 0.98};
  EXPECT_THROW(effective_rate(p, link(0.75)), UnreachableTarget);
  EXPECT_EQ(effective_rate(p, link(0.9)).rounds, 1);
}

TEST(EffectiveRate, RejectsBadProbability) {
  EXPECT_THROW(effective_rate(1.5, PurificationPolicy::direct(), link(0.9)), DomainError);
}

TEST(Tuning, DefaultsPickOneRound) {
  const auto res = tune_base_fidelity(default_candidates(), Attenuation(0.8), 0.9);
  ASSERT_EQ(res.rows.size(), 3u);
  ASSERT_TRUE(res.best);
  EXPECT_EQ(res.rows[*res.best].candidate.label, "one-round");
  EXPECT_NEAR(res.rows[0].rate->p_eff, ref::kPeffDirect, 1e-14);
  EXPECT_NEAR(res.rows[1].rate->p_eff, ref::kPeffOneRound, 1e-14);
  EXPECT_NEAR(res.rows[2].rate->p_eff, ref::kPeffSymmetric, 1e-14);
}

TEST(Tuning, SingleCandidate) {
  const auto res = tune_base_fidelity({default_candidates()[0]}, Attenuation(0.8), 0.9);
  ASSERT_TRUE(res.best);
  EXPECT_EQ(*res.best, 0u);
}

TEST(Tuning, UnreachableCandidateIsKeptWithNote) {
  TuneCandidate bad{"low", 0.51, PurificationPolicy::single_round()};
  bad.policy.target_fidelity = 0.98;
  const auto res = tune_base_fidelity({bad}, Attenuation(0.8), 0.9);
  ASSERT_EQ(res.rows.size(), 1u);
  EXPECT_FALSE(res.rows[0].rate);
  EXPECT_FALSE(res.rows[0].note.empty());
  EXPECT_FALSE(res.best);
}

TEST(Tuning, EmptyGridThrows) {
  EXPECT_THROW(tune_base_fidelity({}, Attenuation(0.8), 0.9), DomainError);
}

TEST(Tuning, TiesGoToEarlierCandidate) {
  TuneCandidate a{"two", 0.9, PurificationPolicy::symmetric(1)};
  TuneCandidate b{"one", 0.9, PurificationPolicy::single_round()};
  // Same rate and rounds, so the earlier candidate wins.
  const auto res = tune_base_fidelity({a, b}, Attenuation(0.8), 0.9);
  EXPECT_EQ(*res.best, 0u);
}
