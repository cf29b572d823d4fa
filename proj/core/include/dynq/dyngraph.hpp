// Per-round communication graphs and the dynamic graph traces built from
// them.

#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dynq/types.hpp"

namespace dynq {

/// Undirected edge. Stored with u < v once normalized.
struct Edge {
  NodeId u = 0;
  NodeId v = 0;

  static Edge normalized(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }
  auto operator<=>(const Edge&) const = default;
};

/// The adversary's edge set for a single round.
struct RoundGraph {
  std::uint32_t n = 1;
  Round round = 0;
  std::vector<Edge> edges;

  /// Normalizes, sorts and deduplicates `edges`. Does not validate.
  static RoundGraph from_edges(std::uint32_t n, Round round, std::vector<Edge> edges);

  std::vector<std::vector<NodeId>> adjacency() const;
  bool has_edge(NodeId a, NodeId b) const;

  friend bool operator==(const RoundGraph&, const RoundGraph&) = default;
};

struct GraphViolation {
  enum class Kind { Disconnected, MalformedEdge };

  Kind kind;
  /// Disconnected: every component that does not contain node 0.
  std::vector<std::vector<NodeId>> components;
  /// MalformedEdge: the offending pair as given.
  Edge edge;

  std::string describe() const;
};

/// nullopt iff the graph is simple, in range and connected.
std::optional<GraphViolation> validate_round_graph(const RoundGraph& g);

struct GraphTrace {
  std::uint32_t n = 1;
  std::vector<RoundGraph> rounds;

  friend bool operator==(const GraphTrace&, const GraphTrace&) = default;
};

/// Every length-T window of consecutive rounds has a connected intersection.
/// Traces shorter than T are vacuously T-interval connected.
bool check_T_interval(const GraphTrace& trace, std::uint32_t T);

/// Same test restricted to windows starting at multiples of T.
bool check_T_interval_aligned(const GraphTrace& trace, std::uint32_t T);

/// Shortest-path length in g. Throws std::out_of_range on bad ids and
/// std::domain_error if v is unreachable (g violated its invariant).
std::uint32_t hop_dist(const RoundGraph& g, NodeId u, NodeId v);

/// Connected components of (V, edges), each sorted, ordered by smallest node.
std::vector<std::vector<NodeId>> connected_components(std::uint32_t n, const std::vector<Edge>& edges);

// Text format:
//   n=<int> rounds=<int>
//   r=<int>: u-v,u-v,...
std::string format_graph_trace(const GraphTrace& trace);
GraphTrace parse_graph_trace(std::string_view text);

std::string format_edges(const std::vector<Edge>& edges);  // "u-v,u-v"
std::vector<Edge> parse_edges(std::string_view text);

}  // namespace dynq
