#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "qubus/repeater_config.hpp"
#include "qubus/rng.hpp"
#include "qubus/scheduler.hpp"

namespace qubus {

struct Delivery {
  double time_s;
  double fidelity;

  friend bool operator==(const Delivery&, const Delivery&) = default;
};

struct TraceEvent {
  double time_s;
  std::string event;
  int station_a;
  int station_b;
  int level;
  double fidelity;
};

/// Header `time_s,event,station_a,station_b,level,fidelity`.
void write_trace_csv(std::ostream& os, const std::vector<TraceEvent>& events);

struct SimReport {
  std::uint64_t seed = 0;
  long pairs_delivered = 0;
  double simulated_seconds = 0.0;
  double rate_pairs_per_s = 0.0;
  double fidelity_min = 0.0;
  double fidelity_mean = 0.0;
  /// Delivered pairs below the working fidelity; reported, never dropped.
  long below_threshold = 0;
  std::string stop_reason;  ///< target_pairs, time_budget or stalled

  int segments = 0;
  int total_qubits = 0;
  double base_success_probability = 0.0;
  double attempt_period_s = 0.0;

  long attempts = 0;
  long base_pairs = 0;
  long purifications_succeeded = 0;
  long purifications_failed = 0;
  long swaps = 0;
  long discarded = 0;

  /// Time-averaged qubits held by pairs at each nesting level.
  std::vector<double> occupancy_by_level;
  double mean_free_qubits = 0.0;
  double mean_attempting_qubits = 0.0;

  std::vector<Delivery> deliveries;
};

/// Heralded generation on one segment. Each attempt is an independent
/// Bernoulli trial with the link's success probability, drawn from the
/// segment's own stream.
class SegmentLink {
 public:
  SegmentLink(double success_probability, std::uint64_t master_seed, int segment)
      : p_(success_probability),
        rng_(master_seed, static_cast<std::uint64_t>(StreamFamily::generation),
             static_cast<std::uint64_t>(segment)) {}

  bool attempt_generation() { return rng_.bernoulli(p_); }
  double success_probability() const { return p_; }

 private:
  double p_;
  RngStream rng_;
};

/// Discrete-event simulation of the nested protocol on a linear chain.
/// Every half station owns qubits_per_half_station qubits that are either
/// free, in a generation attempt, or held by one pair.
class Simulator {
 public:
  /// Validates the config and its fidelity plan; throws ConfigError.
  explicit Simulator(RepeaterConfig cfg, bool record_trace = false);

  /// Processes one event. Returns false once a stop condition is met.
  bool step();
  SimReport run();

  double now() const { return now_; }
  const RepeaterConfig& config() const { return cfg_; }
  const std::vector<TraceEvent>& trace() const { return trace_; }
  long delivered() const { return static_cast<long>(deliveries_.size()); }

  /// Free + attempting + held qubits for every half station, checked against
  /// the configured count. Returns the number of violations.
  int conservation_violations() const;
  /// Pairs referenced by the store or pending operations that are not yet
  /// available (causality check). Returns the number of violations.
  int causality_violations() const;

  SimReport report() const;

 private:
  enum class EventKind { attempt, herald, pair_ready, purify_done };

  struct Event {
    double time;
    std::uint64_t seq;
    EventKind kind;
    int segment = -1;
    int attempts = 0;
    int successes = 0;
    PairId pair = 0;
    bool success = false;
    double attempt_started = 0.0;
  };

  struct Later {
    bool operator()(const Event& x, const Event& y) const {
      return x.time != y.time ? x.time > y.time : x.seq > y.seq;
    }
  };

  // Pools: west_[i] is the right half of station i, east_[i] the left half of
  // station i + 1; both serve segment i.
  struct Pool {
    int free = 0;
    int attempting = 0;
  };

  void push(Event e);
  void request_attempt(int segment);
  void on_attempt(const Event& e);
  void on_herald(const Event& e);
  void on_pair_ready(PairId id);
  void on_purify_done(const Event& e);

  void release_qubits(const PairRecord& p);
  PairRecord& new_pair(int a, int b, int level, const BellMixture& state, double created,
                       double available);
  void retire(PairId id);
  void record(const char* event, const PairRecord& p);
  void advance_clock(double t);
  bool finished() const;

  RepeaterConfig cfg_;
  SchedulePolicy policy_;
  GateErrorModel err_;
  BellMixture base_state_;
  int segments_;
  bool record_trace_;

  std::vector<Pool> west_;
  std::vector<Pool> east_;
  std::vector<bool> attempt_pending_;
  std::vector<SegmentLink> links_;
  std::vector<RngStream> protocol_rng_;

  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t seq_ = 0;
  double now_ = 0.0;
  bool stalled_ = false;

  std::unordered_map<PairId, PairRecord> live_;
  std::unordered_map<PairId, BellMixture> pending_state_;
  PairStore store_;
  PairId next_id_ = 1;

  std::vector<long> held_by_level_;
  std::vector<double> held_integral_;
  double free_integral_ = 0.0;
  double attempting_integral_ = 0.0;
  long free_total_ = 0;
  long attempting_total_ = 0;

  SimReport counters_;
  std::vector<Delivery> deliveries_;
  std::vector<TraceEvent> trace_;
};

/// Runs one trial. Identical config (including seed) gives an identical report.
SimReport run(const RepeaterConfig& cfg);

struct AggregateRate {
  std::size_t trials = 0;
  double mean = 0.0;
  double stderr_of_mean = 0.0;
};

/// Order-independent summary of per-seed rates.
AggregateRate aggregate_rates(const std::vector<SimReport>& reports);

/// One trial per seed; `threads` > 1 runs trials concurrently. Results come
/// back in seed order and do not depend on the thread count.
std::vector<SimReport> run_seeds(const RepeaterConfig& cfg, const std::vector<std::uint64_t>& seeds,
                                 unsigned threads = 1);

}  // namespace qubus
