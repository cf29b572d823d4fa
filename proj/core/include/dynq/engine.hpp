// Synchronous round executor.
//
// Each round r runs:
//   1. inject requests scheduled for r into their issuers' state
//   2. every node fixes one broadcast from its state
//   3. the adversary picks E(r), seeing the pending broadcasts if adaptive
//   4. broadcasts are delivered along E(r)
//   5. nodes integrate what they received and apply phase/period/cycle ends
// and the trace records the round in that order.

#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dynq/adversary.hpp"
#include "dynq/budget.hpp"
#include "dynq/protocol.hpp"
#include "dynq/trace.hpp"
#include "dynq/verify.hpp"
#include "dynq/workload.hpp"

namespace dynq {

enum class Termination { OracleStop, IdleDetect };

const char* to_string(Termination t);
Termination parse_termination(std::string_view text);
EnqueuePolicy parse_policy(std::string_view text);

class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string key, const std::string& what)
      : std::invalid_argument(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct ScenarioConfig {
  std::uint32_t n = 4;
  std::uint32_t k = 1;
  Algorithm algorithm = Algorithm::Alg1;
  std::uint32_t T = 1;
  AdversaryKind adversary;
  ScheduleKind schedule = ScheduleKind::concurrent();
  EnqueuePolicy policy = EnqueuePolicy::LexSmallest;
  NodeId head = 0;
  Round horizon = 0;  // 0 = default_horizon()
  std::uint64_t seed = 0;
  Termination termination = Termination::OracleStop;
  double edge_prob = 0.0;

  /// Throws ConfigError naming the offending field.
  void validate() const;
  Round default_horizon() const;
  Round effective_horizon() const { return horizon ? horizon : default_horizon(); }
  /// Adversary with the run's seed and edge probability filled in, and the
  /// TStable window resolved (2T for Alg2, T otherwise).
  AdversaryKind effective_adversary() const;
  Round cycle_length() const;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

class AdversaryViolation : public std::runtime_error {
 public:
  AdversaryViolation(Round round, const GraphViolation& v)
      : std::runtime_error("round " + std::to_string(round) + ": " + v.describe()), round_(round) {}

  Round round() const { return round_; }

 private:
  Round round_;
};

class World {
 public:
  explicit World(ScenarioConfig cfg);

  void step_round();
  /// Finished by the termination rule or by reaching the horizon.
  bool done() const { return completed_ || round_ >= horizon_; }
  bool completed() const { return completed_; }

  Round round() const { return round_; }
  Round horizon() const { return horizon_; }
  const ScenarioConfig& config() const { return cfg_; }
  const Trace& trace() const { return trace_; }
  Trace take_trace() { return std::move(trace_); }
  const Schedule& schedule() const { return schedule_; }
  const std::vector<SuccValue>& succ() const { return succ_; }
  /// Nodes whose first gamma requests disagreed with the global prefix at an
  /// Alg2 cycle end.
  std::uint64_t prefix_violations() const { return prefix_violations_; }
  bool halted(NodeId v) const { return terminate_[v]; }

 private:
  std::vector<Message> select_broadcasts(Round r);
  void integrate(Round r, const std::vector<std::vector<NodeId>>& adj, const std::vector<Message>& msgs);
  void integrate_alg1(Round r, const std::vector<std::vector<NodeId>>& adj, const std::vector<Message>& msgs);
  void integrate_alg2(Round r, const std::vector<std::vector<NodeId>>& adj, const std::vector<Message>& msgs);
  void integrate_norep(Round r, const std::vector<std::vector<NodeId>>& adj);
  void record_succ_changes(Round r);
  void idle_detect(Round r, const std::vector<std::vector<NodeId>>& adj, const std::vector<Message>& msgs);
  void emit(Event e) { trace_.events.push_back(std::move(e)); }
  void check_oracle_stop();

  ScenarioConfig cfg_;
  AdversaryKind adversary_;
  Round horizon_ = 0;
  Round round_ = 0;
  bool completed_ = false;
  Schedule schedule_;
  Trace trace_;
  GraphTrace history_;

  std::vector<Alg1State> alg1_;
  std::vector<Alg2State> alg2_;
  std::vector<NoRepState> norep_;
  std::vector<SuccValue> succ_;  // mirror of the nodes' succ slots

  std::set<QueueRequest> active_;
  std::size_t enqueued_ = 0;
  std::uint32_t gamma_ = 0;  // Alg2, fixed at each cycle start
  std::uint64_t prefix_violations_ = 0;

  std::vector<Round> quiet_;
  std::vector<bool> terminate_;
};

struct RunResult {
  Trace trace;
  Metrics metrics;
  Schedule schedule;
  bool horizon_exceeded = false;
};

RunResult run(const ScenarioConfig& cfg);

/// verify_trace plus the schedule-aware exactly-once check and, for Alg2,
/// the engine's online prefix agreement count.
Report verify_run(const ScenarioConfig& cfg, const RunResult& result);

}  // namespace dynq
