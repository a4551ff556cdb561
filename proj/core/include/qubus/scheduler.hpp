#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qubus/bell.hpp"

namespace qubus {

using PairId = std::uint64_t;

struct PairRecord {
  PairId id = 0;
  int station_a = 0;  ///< west endpoint
  int station_b = 0;  ///< east endpoint, station_b > station_a
  int level = 0;      ///< log2 of the span in segments
  int depth = 0;      ///< purification rounds since the pair was made at this level
  BellMixture state;
  double created_at = 0.0;
  double available_at = 0.0;

  int span() const { return station_b - station_a; }
};

/// Pairs that are available and not reserved by an operation, grouped by
/// endpoints and kept in arrival order.
class PairStore {
 public:
  void insert(const PairRecord& p);
  void erase(PairId id);
  bool contains(PairId id) const { return index_.count(id) != 0; }
  std::size_t size() const { return index_.size(); }

  const PairRecord& get(PairId id) const { return index_.at(id); }

  /// Waiting pairs on [a, b], oldest first.
  std::vector<PairId> at(int station_a, int station_b) const;

 private:
  std::map<std::pair<int, int>, std::deque<PairId>> by_link_;
  std::map<PairId, PairRecord> index_;
};

enum class ActionKind { deliver, purify, swap, discard };

struct Action {
  ActionKind kind;
  PairId first;                  ///< purify: kept pair; swap: west pair
  std::optional<PairId> second;  ///< purify: sacrificed pair; swap: east pair
  int station = -1;              ///< swap: middle station
};

struct SchedulePolicy {
  int segments = 1;
  double working_fidelity = 0.98;
  PurificationKind kind = PurificationKind::symmetric_nested;
  int round_cap = kMaxPurificationRounds;
};

/// Greedy decision for a pair that just became available. Sub-working pairs
/// purify with the oldest compatible waiting pair on the same link
/// (symmetric: equal depth; pumping: one side fresh). Working pairs swap with
/// their nesting sibling at the shared station, or are delivered when they span
/// the chain. Returns nullopt when the pair should wait.
std::optional<Action> schedule_step(const PairStore& store, const PairRecord& ready,
                                    const SchedulePolicy& policy);

/// Middle station and sibling endpoints of a pair in the strict doubling
/// nesting: {station, sibling_a, sibling_b}.
struct Sibling {
  int station;
  int station_a;
  int station_b;
  bool ready_is_west;
};
Sibling nesting_sibling(const PairRecord& p);

}  // namespace qubus
