// Per-round event log. Every metric and every correctness check is computed
// from a Trace, so traces imported from disk can be re-verified.
//
// Within a round events appear as:
//   RequestInit*  Send*  Graph  Recv*  (Enqueue | Cancel)*  SuccChange*  Terminate*
// The single Graph event sits between the sends and the deliveries, which
// records that the adversary chose E(r) after the round's messages were fixed.

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "dynq/dyngraph.hpp"
#include "dynq/protocol.hpp"
#include "dynq/types.hpp"

namespace dynq {

enum class Algorithm { Alg1, Alg2, NoRep };

const char* to_string(Algorithm a);
Algorithm parse_algorithm(std::string_view text);

enum class EventKind { RequestInit, Send, Graph, Recv, Enqueue, Cancel, SuccChange, Terminate };

const char* to_string(EventKind k);
EventKind parse_event_kind(std::string_view text);

struct Event {
  Round round = 0;
  EventKind kind = EventKind::Send;
  NodeId node = 0;
  Message message = Message::empty();  // Send, Recv, Cancel, Terminate
  NodeId from = 0;                     // Recv
  QueueRequest request;                // RequestInit, Enqueue
  SuccValue before = SuccValue::infinity();
  SuccValue after = SuccValue::infinity();
  std::vector<Edge> edges;  // Graph

  friend bool operator==(const Event&, const Event&) = default;
};

/// Canonical payload text for an event.
std::string payload_text(const Event& e);

struct TraceHeader {
  std::uint32_t n = 1;
  Algorithm algorithm = Algorithm::Alg1;
  std::uint32_t T = 1;
  NodeId head = 0;
  EnqueuePolicy policy = EnqueuePolicy::LexSmallest;
  Round horizon = 0;

  friend bool operator==(const TraceHeader&, const TraceHeader&) = default;
};

struct Trace {
  TraceHeader header;
  std::vector<Event> events;
  Round rounds_executed = 0;
  bool completed = false;

  /// Cycle length in rounds for the header's algorithm (0 for NoRep).
  Round cycle_length() const;
  /// Graph history reconstructed from the Graph events.
  GraphTrace graph_history() const;

  friend bool operator==(const Trace&, const Trace&) = default;
};

// One event per line: round=<r> kind=<K> node=<u> payload=<canonical>
// framed by a "# dynq-trace ..." header and a "# end ..." footer.
std::string format_trace(const Trace& trace);
Trace parse_trace(std::string_view text);

}  // namespace dynq
