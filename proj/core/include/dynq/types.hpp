// Core value types shared by every dynq module: node ids, rounds, queue
// requests, successor pointers and protocol messages.

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dynq {

using NodeId = std::uint32_t;
using Round = std::uint64_t;

/// A queue request (init_round, origin). Ordered lexicographically: earlier
/// initiation round first, then smaller issuer UID.
struct QueueRequest {
  Round init_round = 0;
  NodeId origin = 0;

  auto operator<=>(const QueueRequest&) const = default;
};

std::string to_string(const QueueRequest& q);  // "(r,u)"
QueueRequest parse_request(std::string_view text);

/// Per-node successor slot: a node UID, BOTTOM (this node is the tail) or
/// INFINITY (not in the queue yet).
class SuccValue {
 public:
  enum class Kind : std::uint8_t { Node, Bottom, Infinity };

  static constexpr SuccValue node(NodeId id) { return SuccValue(Kind::Node, id); }
  static constexpr SuccValue bottom() { return SuccValue(Kind::Bottom, 0); }
  static constexpr SuccValue infinity() { return SuccValue(Kind::Infinity, 0); }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_node() const { return kind_ == Kind::Node; }
  constexpr bool is_bottom() const { return kind_ == Kind::Bottom; }
  constexpr bool is_infinity() const { return kind_ == Kind::Infinity; }
  NodeId target() const;

  friend constexpr bool operator==(const SuccValue&, const SuccValue&) = default;

 private:
  constexpr SuccValue(Kind k, NodeId id) : kind_(k), id_(id) {}
  Kind kind_;
  NodeId id_;
};

std::string to_string(const SuccValue& s);  // "BOT", "INF" or the UID
SuccValue parse_succ(std::string_view text);

/// One broadcast payload. At most one request descriptor or one UID rides in
/// a message, which keeps every message within O(log n) bits.
class Message {
 public:
  enum class Kind : std::uint8_t { Empty, Queue, Cancel, Terminate };

  static constexpr Message empty() { return Message(Kind::Empty, {}, 0); }
  static constexpr Message queue(QueueRequest q) { return Message(Kind::Queue, q, 0); }
  static constexpr Message cancel(NodeId target) { return Message(Kind::Cancel, {}, target); }
  static constexpr Message terminate() { return Message(Kind::Terminate, {}, 0); }

  constexpr Kind kind() const { return kind_; }
  constexpr bool is_empty() const { return kind_ == Kind::Empty; }
  constexpr bool is_queue() const { return kind_ == Kind::Queue; }
  constexpr bool is_cancel() const { return kind_ == Kind::Cancel; }
  constexpr bool is_terminate() const { return kind_ == Kind::Terminate; }

  const QueueRequest& request() const;
  NodeId cancel_target() const;

  friend constexpr bool operator==(const Message&, const Message&) = default;

 private:
  constexpr Message(Kind k, QueueRequest q, NodeId t) : kind_(k), request_(q), target_(t) {}
  Kind kind_;
  QueueRequest request_;
  NodeId target_;
};

// Canonical text: EMPTY, TERMINATE, QUEUE(r,u), CANCEL(u).
std::string to_string(const Message& m);
Message parse_message(std::string_view text);

/// An enqueue decision: `predecessor` set its successor to the issuer of
/// `request`.
struct EnqueueEvent {
  NodeId predecessor = 0;
  QueueRequest request;

  friend bool operator==(const EnqueueEvent&, const EnqueueEvent&) = default;
};

/// Raised for malformed text in any of the line formats.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dynq
