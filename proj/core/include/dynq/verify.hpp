// Post-hoc checkers over traces. Everything here is a pure function of a
// Trace (or a graph history), so the same checks run on live simulations
// and on traces read back from disk.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynq/dyngraph.hpp"
#include "dynq/trace.hpp"
#include "dynq/types.hpp"
#include "dynq/workload.hpp"

namespace dynq {

/// Q = (head, ..., tail) read off the successor pointers.
struct QueueOrder {
  std::vector<NodeId> nodes;                    // nodes[0] == head
  std::vector<std::optional<Round>> enqueued_at;  // parallel to nodes; head has none

  NodeId head() const { return nodes.front(); }
  NodeId tail() const { return nodes.back(); }
};

class QueueError : public std::runtime_error {
 public:
  enum class Kind { CycleDetected, DanglingSuccessor, NoTail };

  QueueError(Kind kind, std::vector<NodeId> path, const std::string& what)
      : std::runtime_error(what), kind_(kind), path_(std::move(path)) {}

  Kind kind() const { return kind_; }
  const std::vector<NodeId>& path() const { return path_; }

 private:
  Kind kind_;
  std::vector<NodeId> path_;
};

/// Follows Node(.) links from `head` to the BOTTOM node.
QueueOrder extract_queue(std::span<const SuccValue> succ, NodeId head);

/// Successor slots at the end of the trace (replays SuccChange events).
std::vector<SuccValue> final_succ(const Trace& trace);

enum class CheckStatus { Pass, Fail, Incomplete };

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::Pass;
  std::string detail;
};

struct Report {
  std::vector<CheckResult> checks;

  /// No check failed or was left incomplete.
  bool passed() const;
  /// Some check failed outright (incomplete liveness is not unsound).
  bool unsound() const;
  const CheckResult* find(const std::string& name) const;
  void add(std::string name, CheckStatus status, std::string detail = "ok");
  void merge(const Report& other);

  /// Lines of "CHECK <name> PASS|FAIL detail=<text>". Incomplete checks
  /// print as FAIL with a detail starting "incomplete".
  std::string format() const;
};

/// (a) eventual enqueue, (b) at most one Enqueue per request, (c) queue order
/// equals Enqueue event order. `scheduled` identifies requests by issuer.
Report check_exactly_once(const Trace& trace, const std::vector<ScheduleEntry>& scheduled);
/// Uses the trace's RequestInit events as the schedule.
Report check_exactly_once(const Trace& trace);

struct TaillessSpan {
  Round start = 0;   // first round after which no node has succ = BOTTOM
  Round length = 0;  // consecutive such rounds
  bool truncated = false;  // trace ended while tailless

  friend bool operator==(const TaillessSpan&, const TaillessSpan&) = default;
};

std::vector<TaillessSpan> tailless_spans(const Trace& trace);

/// |{v : (u,0) ~> (v,r)}| and |{v : (v,0) ~> (u,r)}| over graphs 0..r-1.
std::size_t influence_out(const GraphTrace& history, NodeId u, Round r);
std::size_t influence_in(const GraphTrace& history, NodeId u, Round r);
/// Both influence sets have at least min(r+1, n) members.
bool influence_growth(const GraphTrace& history, NodeId u, Round r);
/// influence_growth for every u and every r in [0, rounds]. Bitset sweep.
bool influence_growth_all(const GraphTrace& history);

/// Requests injected at or before `round` and not enqueued before it.
std::set<QueueRequest> active_at(const Trace& trace, Round round);

/// Alg1: the smallest request active at the cycle start is known to every
/// node by the end of the search phase. Alg2: the min(beta, T) smallest are
/// known to every node by the cycle end. Cycles the trace does not cover up
/// to the checkpoint are vacuously true.
bool dissemination_check(const Trace& trace, std::uint64_t cycle);

struct Metrics {
  bool completed = false;
  Round rounds_total = 0;
  std::optional<Round> completion_round;
  std::map<NodeId, Round> enqueue_round;  // by issuer
  std::vector<std::uint32_t> cycle_beta;
  std::vector<std::uint32_t> cycle_gamma;
  std::uint32_t alpha = 0;  // min beta over cycles with beta >= 1
  std::uint64_t cycles_used = 0;
  Round max_tailless_span = 0;
  std::size_t enqueue_count = 0;
  std::set<NodeId> visited;  // nodes that broadcast a QUEUE message
  std::uint64_t prefix_violations = 0;  // filled by the engine (Alg2)
};

Metrics compute_metrics(const Trace& trace);

struct VerifyOptions {
  /// Enables the schedule-dependent order checks.
  std::optional<ScheduleKind> schedule;
  /// Requests the run was asked to serve. Defaults to the RequestInit events.
  std::optional<std::vector<ScheduleEntry>> scheduled;
};

/// Runs every applicable check on a trace.
Report verify_trace(const Trace& trace, const VerifyOptions& options = {});

// Individual structural checks used by verify_trace.
CheckResult check_round_structure(const Trace& trace);
CheckResult check_succ_transitions(const Trace& trace);
CheckResult check_taillessness(const Trace& trace);
CheckResult check_dissemination(const Trace& trace);
CheckResult check_influence(const Trace& trace);
CheckResult check_budget(const Trace& trace);
CheckResult check_queue_chain(const Trace& trace);
/// Sequential: queue order is initiation order. Concurrent + Alg1 +
/// LexSmallest: queue order is UID-ascending. Otherwise nullopt.
std::optional<CheckResult> check_order(const Trace& trace, const ScheduleKind& schedule);

}  // namespace dynq
