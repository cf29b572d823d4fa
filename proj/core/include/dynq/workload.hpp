// Request schedules for sequential, concurrent, dynamic and continuous
// executions.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dynq/types.hpp"

namespace dynq {

enum class ScheduleType { Sequential, Concurrent, Dynamic, Continuous };

struct ScheduleKind {
  ScheduleType type = ScheduleType::Concurrent;
  /// Dynamic: init rounds drawn uniformly from [0, window).
  Round window = 0;
  /// Continuous: requests released at each cycle start.
  std::uint32_t rate = 1;

  static ScheduleKind sequential() { return {ScheduleType::Sequential, 0, 1}; }
  static ScheduleKind concurrent() { return {ScheduleType::Concurrent, 0, 1}; }
  static ScheduleKind dynamic(Round window) { return {ScheduleType::Dynamic, window, 1}; }
  static ScheduleKind continuous(std::uint32_t rate) { return {ScheduleType::Continuous, 0, rate}; }

  friend bool operator==(const ScheduleKind&, const ScheduleKind&) = default;
};

std::string to_string(const ScheduleKind& kind);  // "Sequential", "Dynamic(40)", ...
ScheduleKind parse_schedule(std::string_view text);

class TooManyRequests : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ScheduleEntry {
  Round init_round = 0;
  NodeId issuer = 0;

  friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};

/// Requests to be issued, sorted by init_round. Sequential schedules are
/// lazy: only the first entry is known up front, and each following entry is
/// released by `on_completed` once the previous request is fully served.
class Schedule {
 public:
  Schedule() = default;
  Schedule(ScheduleKind kind, std::vector<NodeId> issuers, std::vector<ScheduleEntry> released);

  const ScheduleKind& kind() const { return kind_; }
  std::size_t total() const { return issuers_.size(); }
  const std::vector<NodeId>& issuers() const { return issuers_; }
  const std::vector<ScheduleEntry>& released() const { return released_; }
  bool fully_released() const { return released_.size() == issuers_.size(); }

  /// Entries with init_round == round.
  std::vector<ScheduleEntry> due_at(Round round) const;

  /// Sequential only: the issuer of the latest released request finished at
  /// `round`; the next request starts the round after.
  void on_completed(NodeId issuer, Round round);

 private:
  ScheduleKind kind_;
  std::vector<NodeId> issuers_;
  std::vector<ScheduleEntry> released_;
};

/// Builds a schedule of k requests from distinct non-head nodes.
/// `cycle_length` places Continuous arrivals on cycle starts.
/// Throws TooManyRequests if k > n - 1.
Schedule make_schedule(const ScheduleKind& kind, std::uint32_t n, std::uint32_t k, std::uint64_t seed,
                       NodeId head = 0, Round cycle_length = 1);

std::string format_schedule(const std::vector<ScheduleEntry>& entries);  // "init=<r> node=<u>" lines

}  // namespace dynq
