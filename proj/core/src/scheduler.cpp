#include "qubus/scheduler.hpp"

#include <algorithm>

namespace qubus {

void PairStore::insert(const PairRecord& p) {
  by_link_[{p.station_a, p.station_b}].push_back(p.id);
  index_.emplace(p.id, p);
}

void PairStore::erase(PairId id) {
  auto it = index_.find(id);
  if (it == index_.end()) {
    return;
  }
  auto link = by_link_.find({it->second.station_a, it->second.station_b});
  auto& q = link->second;
  q.erase(std::find(q.begin(), q.end(), id));
  if (q.empty()) {
    by_link_.erase(link);
  }
  index_.erase(it);
}

std::vector<PairId> PairStore::at(int station_a, int station_b) const {
  auto it = by_link_.find({station_a, station_b});
  if (it == by_link_.end()) {
    return {};
  }
  return {it->second.begin(), it->second.end()};
}

Sibling nesting_sibling(const PairRecord& p) {
  const int span = p.span();
  const bool west = (p.station_a / span) % 2 == 0;
  if (west) {
    return {p.station_b, p.station_b, p.station_b + span, true};
  }
  return {p.station_a, p.station_a - span, p.station_a, false};
}

std::optional<Action> schedule_step(const PairStore& store, const PairRecord& ready,
                                    const SchedulePolicy& policy) {
  const bool working = ready.state.fidelity() >= policy.working_fidelity;

  if (working) {
    if (ready.span() == policy.segments) {
      return Action{ActionKind::deliver, ready.id, std::nullopt};
    }
    const Sibling sib = nesting_sibling(ready);
    for (PairId id : store.at(sib.station_a, sib.station_b)) {
      if (store.get(id).state.fidelity() >= policy.working_fidelity) {
        return sib.ready_is_west ? Action{ActionKind::swap, ready.id, id, sib.station}
                                 : Action{ActionKind::swap, id, ready.id, sib.station};
      }
    }
    return std::nullopt;
  }

  if (ready.depth >= policy.round_cap) {
    return Action{ActionKind::discard, ready.id, std::nullopt};
  }

  for (PairId id : store.at(ready.station_a, ready.station_b)) {
    const PairRecord& other = store.get(id);
    if (other.state.fidelity() >= policy.working_fidelity || other.depth >= policy.round_cap) {
      continue;
    }
    bool compatible = false;
    switch (policy.kind) {
      case PurificationKind::symmetric_nested:
      case PurificationKind::single_round:
        compatible = other.depth == ready.depth;
        break;
      case PurificationKind::pumping:
        compatible = other.depth == 0 || ready.depth == 0;
        break;
    }
    if (!compatible) {
      continue;
    }
    // The deeper (or, on a tie, older) pair is kept.
    const bool keep_ready = ready.depth > other.depth;
    return keep_ready ? Action{ActionKind::purify, ready.id, id}
                      : Action{ActionKind::purify, id, ready.id};
  }
  return std::nullopt;
}

}  // namespace qubus
