// Per-node queuing state machines.
//
//  * Alg1: 1-interval connected graphs. Cycles of 2n rounds: an n-round
//    search phase that floods the smallest pending request, then an n-round
//    cancelation phase that floods the enqueued request's cancel message.
//  * Alg2: T-interval connected graphs. Cycles of ceil(n/T) periods of 2T
//    rounds with pipelined dissemination; gamma requests join per cycle.
//  * NoRep: a single-copy forwarding baseline that never replicates the
//    request. It exists to show the trap adversary starves it.
//
// All transitions are pure: they take a state by value and return the next
// one. Phase and cycle bookkeeping comes from the shared global clock.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dynq/types.hpp"

namespace dynq {

enum class EnqueuePolicy { FirstArrival, LexSmallest };

const char* to_string(EnqueuePolicy p);

class PhaseMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// ---------------------------------------------------------------------------
// Algorithm 1

enum class Alg1Phase { Search, Cancel };

/// Position of a global round inside the Alg1 cycle structure.
struct Alg1Clock {
  std::uint64_t cycle = 0;
  Alg1Phase phase = Alg1Phase::Search;
  std::uint32_t round_in_phase = 0;

  static Alg1Clock at(Round round, std::uint32_t n);
  bool is_phase_end(std::uint32_t n) const { return round_in_phase + 1 == n; }
};

struct Alg1State {
  NodeId me = 0;
  SuccValue succ = SuccValue::infinity();
  /// R: known requests, each with the round it first arrived.
  std::map<QueueRequest, Round> requests;
  /// C: cancel targets heard this cycle. Holds at most one element.
  std::set<NodeId> cancels;
  Alg1Clock clock;
};

Alg1State alg1_initial(NodeId me, bool is_head);

/// Adds the node's own request to R (first arrival = its initiation round).
Alg1State alg1_inject(Alg1State s, QueueRequest own);

/// Search: QUEUE(min R) or EMPTY. Cancel: CANCEL(min C) or EMPTY.
Message alg1_select_broadcast(const Alg1State& s);

/// Merges neighbors' broadcasts. Throws PhaseMismatch for a CANCEL during
/// search or a QUEUE during cancel.
Alg1State alg1_integrate(Alg1State s, std::span<const Message> received, Round round);

/// End of search phase. The tail (succ = BOTTOM) picks a target from R by
/// `policy`, points at its issuer and seeds C with the cancel.
std::pair<Alg1State, std::optional<EnqueueEvent>> alg1_end_search(Alg1State s, EnqueuePolicy policy);

/// End of cancel phase: the cancel's target becomes the tail; everyone drops
/// the canceled request from R and clears C.
Alg1State alg1_end_cancel(Alg1State s);

// ---------------------------------------------------------------------------
// Algorithm 2

struct Alg2Clock {
  std::uint64_t cycle = 0;
  std::uint32_t period = 0;
  std::uint32_t round_in_period = 0;

  static std::uint32_t periods_per_cycle(std::uint32_t n, std::uint32_t T) { return (n + T - 1) / T; }
  static Round cycle_length(std::uint32_t n, std::uint32_t T) {
    return Round{2} * T * periods_per_cycle(n, T);
  }
  static Alg2Clock at(Round round, std::uint32_t n, std::uint32_t T);
  bool is_period_end(std::uint32_t T) const { return round_in_period + 1 == 2 * T; }
  bool is_cycle_end(std::uint32_t n, std::uint32_t T) const {
    return is_period_end(T) && period + 1 == periods_per_cycle(n, T);
  }
};

struct Alg2State {
  NodeId me = 0;
  SuccValue succ = SuccValue::infinity();
  std::set<QueueRequest> known;      // A
  std::set<QueueRequest> broadcast;  // S, always a subset of A
  Alg2Clock clock;
};

Alg2State alg2_initial(NodeId me, bool is_head);
Alg2State alg2_inject(Alg2State s, QueueRequest own);

/// QUEUE(min of A \ S), or EMPTY when A = S. The caller records the choice
/// with alg2_record_broadcast.
Message alg2_select_broadcast(const Alg2State& s);
Alg2State alg2_record_broadcast(Alg2State s, const Message& sent);
Alg2State alg2_integrate(Alg2State s, std::span<const Message> received);

/// S <- {} after each 2T-round period.
Alg2State alg2_end_period(Alg2State s);

/// Chains the gamma smallest requests of A behind the tail, makes the
/// gamma-th issuer the new tail and removes them from A. Events are returned
/// in chain order.
std::pair<Alg2State, std::vector<EnqueueEvent>> alg2_end_cycle(Alg2State s, std::uint32_t gamma);

// ---------------------------------------------------------------------------
// No-replication baseline

struct NoRepState {
  NodeId me = 0;
  SuccValue succ = SuccValue::infinity();
  std::optional<QueueRequest> holds_message;
  std::optional<NodeId> previous_sender;
};

NoRepState norep_initial(NodeId me, bool is_head);
NoRepState norep_inject(NoRepState s, QueueRequest own);
Message norep_select_broadcast(const NoRepState& s);

/// Single message hand-over.
struct Handoff {
  QueueRequest request;
  NodeId from = 0;
};

struct NoRepStep {
  NoRepState state;
  std::optional<NodeId> pass_to;       // set when this node gave the message away
  std::optional<EnqueueEvent> enqueue; // set when this (tail) node accepted it
};

/// One round of the baseline for one node. A holder passes its only copy to
/// its lowest-UID neighbor other than the previous sender (forced back when
/// that is the only neighbor). A tail that receives the copy enqueues it.
NoRepStep norep_step(NoRepState s, std::optional<Handoff> incoming, std::span<const NodeId> neighbors);

}  // namespace dynq
