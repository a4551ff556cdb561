#include <gtest/gtest.h>

#include "qubus/scheduler.hpp"

using namespace qubus;

namespace {

PairRecord pair(PairId id, int a, int b, double f, int depth = 0) {
  PairRecord p;
  p.id = id;
  p.station_a = a;
  p.station_b = b;
  p.depth = depth;
  p.state = BellMixture::dephased(f);
  p.level = 0;
  for (int s = b - a; s > 1; s >>= 1) ++p.level;
  return p;
}

SchedulePolicy policy(int segments) { return {segments, 0.98, PurificationKind::symmetric_nested, 4}; }

}  // namespace

TEST(PairStore, KeepsArrivalOrderPerLink) {
  PairStore s;
  s.insert(pair(3, 0, 1, 0.9));
  s.insert(pair(1, 0, 1, 0.9));
  s.insert(pair(2, 1, 2, 0.9));
  EXPECT_EQ(s.at(0, 1), (std::vector<PairId>{3, 1}));
  s.erase(3);
  EXPECT_EQ(s.at(0, 1), (std::vector<PairId>{1}));
  s.erase(42);
  EXPECT_EQ(s.size(), 2u);
  EXPECT_TRUE(s.at(5, 6).empty());
}

TEST(Nesting, Siblings) {
  auto s = nesting_sibling(pair(1, 0, 1, 1.0));
  EXPECT_EQ(s.station, 1);
  EXPECT_EQ(s.station_a, 1);
  EXPECT_EQ(s.station_b, 2);
  EXPECT_TRUE(s.ready_is_west);
  s = nesting_sibling(pair(1, 1, 2, 1.0));
  EXPECT_EQ(s.station, 1);
  EXPECT_EQ(s.station_a, 0);
  EXPECT_FALSE(s.ready_is_west);
  s = nesting_sibling(pair(1, 8, 12, 1.0));
  EXPECT_EQ(s.station, 12);
  EXPECT_EQ(s.station_b, 16);
  s = nesting_sibling(pair(1, 2, 4, 1.0));
  EXPECT_EQ(s.station_a, 0);
  EXPECT_EQ(s.station, 2);
}

TEST(Schedule, FullSpanIsDelivered) {
  PairStore s;
  const auto a = schedule_step(s, pair(1, 0, 4, 0.99), policy(4));
  ASSERT_TRUE(a);
  EXPECT_EQ(a->kind, ActionKind::deliver);
}

TEST(Schedule, WorkingPairWaitsForSibling) {
  PairStore s;
  EXPECT_FALSE(schedule_step(s, pair(1, 0, 1, 0.99), policy(4)));
  s.insert(pair(2, 1, 2, 0.9));  // not yet working
  EXPECT_FALSE(schedule_step(s, pair(1, 0, 1, 0.99), policy(4)));
  s.insert(pair(3, 1, 2, 0.985));
  const auto a = schedule_step(s, pair(1, 0, 1, 0.99), policy(4));
  ASSERT_TRUE(a);
  EXPECT_EQ(a->kind, ActionKind::swap);
  EXPECT_EQ(a->first, 1u);
  EXPECT_EQ(*a->second, 3u);
  EXPECT_EQ(a->station, 1);
}

TEST(Schedule, EastPairSwapsAsSecond) {
  PairStore s;
  s.insert(pair(7, 0, 2, 0.99));
  const auto a = schedule_step(s, pair(8, 2, 4, 0.99), policy(8));
  ASSERT_TRUE(a);
  EXPECT_EQ(a->first, 7u);
  EXPECT_EQ(*a->second, 8u);
  EXPECT_EQ(a->station, 2);
}

TEST(Schedule, PurifiesWithOldestEqualDepth) {
  PairStore s;
  s.insert(pair(1, 0, 1, 0.9, 1));
  s.insert(pair(2, 0, 1, 0.9, 0));
  s.insert(pair(3, 0, 1, 0.9, 0));
  const auto a = schedule_step(s, pair(4, 0, 1, 0.9, 0), policy(2));
  ASSERT_TRUE(a);
  EXPECT_EQ(a->kind, ActionKind::purify);
  EXPECT_EQ(a->first, 2u);
  EXPECT_EQ(*a->second, 4u);
}

TEST(Schedule, PumpingNeedsOneFreshPair) {
  PairStore s;
  s.insert(pair(1, 0, 1, 0.9, 1));
  auto pol = policy(2);
  EXPECT_FALSE(schedule_step(s, pair(2, 0, 1, 0.9, 2), pol));
  pol.kind = PurificationKind::pumping;
  EXPECT_FALSE(schedule_step(s, pair(2, 0, 1, 0.9, 2), pol));
  const auto a = schedule_step(s, pair(3, 0, 1, 0.9, 0), pol);
  ASSERT_TRUE(a);
  EXPECT_EQ(a->first, 1u);
  EXPECT_EQ(*a->second, 3u);
}

TEST(Schedule, RoundCapDiscards) {
  PairStore s;
  const auto a = schedule_step(s, pair(1, 0, 1, 0.9, 4), policy(2));
  ASSERT_TRUE(a);
  EXPECT_EQ(a->kind, ActionKind::discard);
}
