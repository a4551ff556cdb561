#include "qubus/repeater_sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <thread>

#include "qubus/errors.hpp"

namespace qubus {

namespace {

RepeaterConfig checked(RepeaterConfig cfg) {
  cfg.validate();
  try {
    plan_fidelity(cfg);
  } catch (const UnreachableTarget& e) {
    throw ConfigError("base_fidelity", e.what());
  }
  return cfg;
}

}  // namespace

void write_trace_csv(std::ostream& os, const std::vector<TraceEvent>& events) {
  os << "time_s,event,station_a,station_b,level,fidelity\n";
  char buf[160];
  for (const auto& e : events) {
    std::snprintf(buf, sizeof buf, "%.9g,%s,%d,%d,%d,%.9g\n", e.time_s, e.event.c_str(),
                  e.station_a, e.station_b, e.level, e.fidelity);
    os << buf;
  }
}

Simulator::Simulator(RepeaterConfig cfg, bool record_trace)
    : cfg_(checked(std::move(cfg))),
      policy_{cfg_.segments(), cfg_.working_fidelity, cfg_.policy, cfg_.purification_round_cap()},
      err_(cfg_.gate_error_model()),
      base_state_(conditioned_state(cfg_.base_fidelity)),
      segments_(cfg_.segments()),
      record_trace_(record_trace),
      west_(segments_),
      east_(segments_),
      attempt_pending_(segments_, false),
      held_by_level_(cfg_.nesting_levels() + 1, 0),
      held_integral_(cfg_.nesting_levels() + 1, 0.0) {
  const double p = cfg_.base_success_probability();
  links_.reserve(segments_);
  protocol_rng_.reserve(segments_);
  for (int i = 0; i < segments_; ++i) {
    west_[i].free = cfg_.qubits_per_half_station;
    east_[i].free = cfg_.qubits_per_half_station;
    links_.emplace_back(p, cfg_.seed, i);
    protocol_rng_.emplace_back(cfg_.seed, static_cast<std::uint64_t>(StreamFamily::protocol), i);
  }
  free_total_ = 2L * cfg_.qubits_per_half_station * segments_;

  counters_.seed = cfg_.seed;
  counters_.segments = segments_;
  counters_.total_qubits = cfg_.total_qubits();
  counters_.base_success_probability = p;
  counters_.attempt_period_s = cfg_.attempt_period_s();

  for (int i = 0; i < segments_; ++i) {
    request_attempt(i);
  }
}

void Simulator::push(Event e) {
  e.seq = seq_++;
  queue_.push(e);
}

void Simulator::request_attempt(int segment) {
  if (attempt_pending_[segment]) {
    return;
  }
  attempt_pending_[segment] = true;
  Event e{};
  e.time = now_;
  e.kind = EventKind::attempt;
  e.segment = segment;
  push(e);
}

void Simulator::advance_clock(double t) {
  const double dt = t - now_;
  if (dt > 0.0) {
    for (std::size_t l = 0; l < held_by_level_.size(); ++l) {
      held_integral_[l] += dt * static_cast<double>(held_by_level_[l]);
    }
    free_integral_ += dt * static_cast<double>(free_total_);
    attempting_integral_ += dt * static_cast<double>(attempting_total_);
  }
  now_ = t;
}

bool Simulator::finished() const {
  return stalled_ || delivered() >= cfg_.target_pairs || now_ >= cfg_.time_budget_s;
}

bool Simulator::step() {
  if (finished()) {
    return false;
  }
  if (queue_.empty()) {
    stalled_ = true;
    return false;
  }
  const Event e = queue_.top();
  if (e.time > cfg_.time_budget_s) {
    advance_clock(cfg_.time_budget_s);
    return false;
  }
  queue_.pop();
  advance_clock(e.time);
  switch (e.kind) {
    case EventKind::attempt: on_attempt(e); break;
    case EventKind::herald: on_herald(e); break;
    case EventKind::pair_ready: on_pair_ready(e.pair); break;
    case EventKind::purify_done: on_purify_done(e); break;
  }
  return !finished();
}

SimReport Simulator::run() {
  while (step()) {
  }
  return report();
}

void Simulator::on_attempt(const Event& e) {
  const int i = e.segment;
  attempt_pending_[i] = false;
  const int n = std::min(west_[i].free, east_[i].free);
  if (n == 0) {
    return;
  }
  int successes = 0;
  for (int k = 0; k < n; ++k) {
    successes += links_[i].attempt_generation() ? 1 : 0;
  }
  west_[i].free -= n;
  east_[i].free -= n;
  west_[i].attempting += n;
  east_[i].attempting += n;
  free_total_ -= 2 * n;
  attempting_total_ += 2 * n;
  counters_.attempts += n;

  Event h{};
  h.time = now_ + cfg_.attempt_period_s();
  h.kind = EventKind::herald;
  h.segment = i;
  h.attempts = n;
  h.successes = successes;
  h.attempt_started = now_;
  push(h);
}

void Simulator::on_herald(const Event& e) {
  const int i = e.segment;
  const int failed = e.attempts - e.successes;
  west_[i].attempting -= e.attempts;
  east_[i].attempting -= e.attempts;
  attempting_total_ -= 2 * e.attempts;
  west_[i].free += failed;
  east_[i].free += failed;
  free_total_ += 2 * failed;
  counters_.base_pairs += e.successes;

  const double created = e.attempt_started + cfg_.segment_delay_s();
  for (int k = 0; k < e.successes; ++k) {
    PairRecord& p = new_pair(i, i + 1, 0, base_state_, created, now_);
    record("generate", p);
    Event r{};
    r.time = now_;
    r.kind = EventKind::pair_ready;
    r.pair = p.id;
    push(r);
  }
  request_attempt(i);
}

PairRecord& Simulator::new_pair(int a, int b, int level, const BellMixture& state, double created,
                                double available) {
  PairRecord p;
  p.id = next_id_++;
  p.station_a = a;
  p.station_b = b;
  p.level = level;
  p.depth = 0;
  p.state = state;
  p.created_at = created;
  p.available_at = available;
  held_by_level_[level] += 2;
  return live_.emplace(p.id, p).first->second;
}

void Simulator::retire(PairId id) {
  auto it = live_.find(id);
  held_by_level_[it->second.level] -= 2;
  store_.erase(id);
  live_.erase(it);
}

void Simulator::release_qubits(const PairRecord& p) {
  west_[p.station_a].free += 1;
  east_[p.station_b - 1].free += 1;
  free_total_ += 2;
  request_attempt(p.station_a);
  request_attempt(p.station_b - 1);
}

void Simulator::record(const char* event, const PairRecord& p) {
  if (!record_trace_) {
    return;
  }
  trace_.push_back({now_, event, p.station_a, p.station_b, p.level, p.state.fidelity()});
}

void Simulator::on_pair_ready(PairId id) {
  const PairRecord ready = live_.at(id);
  const auto action = schedule_step(store_, ready, policy_);
  if (!action) {
    store_.insert(ready);
    return;
  }

  switch (action->kind) {
    case ActionKind::deliver: {
      const double f = ready.state.fidelity();
      deliveries_.push_back({now_, f});
      if (f < cfg_.working_fidelity) {
        ++counters_.below_threshold;
      }
      record("deliver", ready);
      release_qubits(ready);
      retire(id);
      break;
    }
    case ActionKind::discard: {
      ++counters_.discarded;
      record("discard", ready);
      release_qubits(ready);
      retire(id);
      break;
    }
    case ActionKind::purify: {
      const PairId kept_id = action->first;
      const PairId sacrificed_id = *action->second;
      store_.erase(kept_id);
      const PairRecord& kept = live_.at(kept_id);
      const PairRecord sacrificed = live_.at(sacrificed_id);
      const auto res = purify_adaptive(kept.state, sacrificed.state, err_);
      const bool ok = protocol_rng_[kept.station_a].bernoulli(res.success_probability);

      release_qubits(sacrificed);
      retire(sacrificed_id);

      Event done{};
      done.time = now_ + 2.0 * kept.span() * cfg_.segment_delay_s();
      done.kind = EventKind::purify_done;
      done.pair = kept_id;
      done.success = ok;
      pending_state_.insert_or_assign(kept_id, res.state);
      push(done);
      break;
    }
    case ActionKind::swap: {
      const PairRecord west = live_.at(action->first);
      const PairRecord east = live_.at(*action->second);
      const int m = action->station;
      const BellMixture joined = swap(west.state, east.state, err_);

      retire(west.id);
      retire(east.id);
      east_[m - 1].free += 1;
      west_[m].free += 1;
      free_total_ += 2;
      ++counters_.swaps;

      const double delay = (m - west.station_a) * cfg_.segment_delay_s();
      PairRecord& p =
          new_pair(west.station_a, east.station_b, west.level + 1, joined, now_, now_ + delay);
      record("swap", p);
      Event r{};
      r.time = p.available_at;
      r.kind = EventKind::pair_ready;
      r.pair = p.id;
      push(r);

      request_attempt(m - 1);
      request_attempt(m);
      break;
    }
  }
}

void Simulator::on_purify_done(const Event& e) {
  auto state = pending_state_.extract(e.pair);
  PairRecord& kept = live_.at(e.pair);
  if (!e.success) {
    ++counters_.purifications_failed;
    record("purify_fail", kept);
    release_qubits(kept);
    retire(e.pair);
    return;
  }
  ++counters_.purifications_succeeded;
  kept.state = state.mapped();
  kept.depth += 1;
  kept.available_at = now_;
  record("purify_ok", kept);
  on_pair_ready(e.pair);
}

int Simulator::conservation_violations() const {
  std::vector<int> held_west(segments_, 0);
  std::vector<int> held_east(segments_, 0);
  for (const auto& [id, p] : live_) {
    ++held_west[p.station_a];
    ++held_east[p.station_b - 1];
  }
  int bad = 0;
  const int q = cfg_.qubits_per_half_station;
  for (int i = 0; i < segments_; ++i) {
    const auto& w = west_[i];
    const auto& e = east_[i];
    if (w.free < 0 || w.attempting < 0 || w.free + w.attempting + held_west[i] != q) ++bad;
    if (e.free < 0 || e.attempting < 0 || e.free + e.attempting + held_east[i] != q) ++bad;
  }
  return bad;
}

int Simulator::causality_violations() const {
  int bad = 0;
  for (const auto& [id, p] : live_) {
    if (store_.contains(id) && p.available_at > now_) ++bad;
    if (p.available_at < p.created_at) ++bad;
  }
  return bad;
}

SimReport Simulator::report() const {
  SimReport r = counters_;
  r.pairs_delivered = delivered();
  r.simulated_seconds = now_;
  r.rate_pairs_per_s = now_ > 0.0 ? static_cast<double>(r.pairs_delivered) / now_ : 0.0;
  r.deliveries = deliveries_;
  if (!deliveries_.empty()) {
    double sum = 0.0;
    double lo = 1.0;
    for (const auto& d : deliveries_) {
      sum += d.fidelity;
      lo = std::min(lo, d.fidelity);
    }
    r.fidelity_min = lo;
    r.fidelity_mean = sum / static_cast<double>(deliveries_.size());
  }
  if (stalled_) {
    r.stop_reason = "stalled";
  } else if (delivered() >= cfg_.target_pairs) {
    r.stop_reason = "target_pairs";
  } else {
    r.stop_reason = "time_budget";
  }
  r.occupancy_by_level.resize(held_integral_.size());
  for (std::size_t l = 0; l < held_integral_.size(); ++l) {
    r.occupancy_by_level[l] = now_ > 0.0 ? held_integral_[l] / now_ : 0.0;
  }
  r.mean_free_qubits = now_ > 0.0 ? free_integral_ / now_ : 0.0;
  r.mean_attempting_qubits = now_ > 0.0 ? attempting_integral_ / now_ : 0.0;
  return r;
}

SimReport run(const RepeaterConfig& cfg) {
  return Simulator(cfg).run();
}

AggregateRate aggregate_rates(const std::vector<SimReport>& reports) {
  AggregateRate a;
  a.trials = reports.size();
  if (reports.empty()) {
    return a;
  }
  std::vector<double> rates;
  rates.reserve(reports.size());
  for (const auto& r : reports) {
    rates.push_back(r.rate_pairs_per_s);
  }
  std::sort(rates.begin(), rates.end());
  const double n = static_cast<double>(rates.size());
  a.mean = std::accumulate(rates.begin(), rates.end(), 0.0) / n;
  if (rates.size() > 1) {
    double ss = 0.0;
    for (double x : rates) {
      ss += (x - a.mean) * (x - a.mean);
    }
    a.stderr_of_mean = std::sqrt(ss / (n - 1.0) / n);
  }
  return a;
}

std::vector<SimReport> run_seeds(const RepeaterConfig& cfg, const std::vector<std::uint64_t>& seeds,
                                 unsigned threads) {
  std::vector<RepeaterConfig> configs(seeds.size(), cfg);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    configs[i].seed = seeds[i];
    checked(configs[i]);
  }
  std::vector<SimReport> out(seeds.size());
  if (threads <= 1 || seeds.size() <= 1) {
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      out[i] = run(configs[i]);
    }
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  const unsigned n = std::min<unsigned>(threads, static_cast<unsigned>(seeds.size()));
  for (unsigned t = 0; t < n; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < seeds.size(); i = next++) {
        out[i] = run(configs[i]);
      }
    });
  }
  pool.clear();
  return out;
}

}  // namespace qubus
