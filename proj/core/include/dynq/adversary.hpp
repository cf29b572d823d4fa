// Adversary strategies that choose each round's communication graph.
//
// Oblivious strategies (StaticComplete, ObliviousRandom, TStable) depend only
// on (seed, round). Adaptive strategies (AdaptiveLine, Trap) model the strong
// adversary: they see every message the nodes are about to send this round,
// plus the nodes' successor slots, before fixing the edges.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "dynq/dyngraph.hpp"
#include "dynq/types.hpp"

namespace dynq {

enum class AdversaryType { StaticComplete, ObliviousRandom, TStable, AdaptiveLine, Trap };

struct AdversaryKind {
  AdversaryType type = AdversaryType::StaticComplete;
  /// Stability window for TStable. 0 means "pick for me" (2T for the
  /// T-interval algorithm, see ScenarioConfig).
  std::uint32_t T = 0;
  std::uint64_t seed = 0;
  /// Probability of each non-tree pair being added on top of the random
  /// spanning tree (random strategies only).
  double edge_prob = 0.0;

  bool is_adaptive() const {
    return type == AdversaryType::AdaptiveLine || type == AdversaryType::Trap;
  }

  static AdversaryKind static_complete() { return {}; }
  static AdversaryKind oblivious_random(std::uint64_t seed, double p = 0.0) {
    return {AdversaryType::ObliviousRandom, 0, seed, p};
  }
  static AdversaryKind t_stable(std::uint32_t T, std::uint64_t seed, double p = 0.0) {
    return {AdversaryType::TStable, T, seed, p};
  }
  static AdversaryKind adaptive_line() { return {AdversaryType::AdaptiveLine, 0, 0, 0.0}; }
  static AdversaryKind trap() { return {AdversaryType::Trap, 0, 0, 0.0}; }

  friend bool operator==(const AdversaryKind&, const AdversaryKind&) = default;
};

/// "StaticComplete", "TStable(4)", ... (seed and edge_prob are not part of
/// the name).
std::string to_string(const AdversaryKind& kind);
/// Parses the name form. "TStable" without a window leaves T = 0.
AdversaryKind parse_adversary(std::string_view text);

/// What an adaptive adversary sees before choosing E(r).
struct NetworkView {
  std::span<const Message> pending;  // one per node, EMPTY allowed
  std::span<const SuccValue> succ;   // one per node
};

class AdaptivityUnavailable : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Chooses E(round). `history` holds the graphs of rounds [0, round).
/// Adaptive kinds throw AdaptivityUnavailable when `view` is withheld.
RoundGraph adversary_next_edges(const AdversaryKind& kind, const GraphTrace& history,
                                std::optional<NetworkView> view, Round round);

// Building blocks, exposed for tests and benchmarks.

/// Uniform random spanning tree of K_n (Aldous-Broder walk), then each other
/// pair independently with probability p. Deterministic in (seed, stream, index).
std::vector<Edge> random_connected_edges(std::uint32_t n, std::uint64_t seed, std::uint64_t tree_index,
                                         std::uint64_t extra_index, double p);

std::vector<Edge> complete_edges(std::uint32_t n);

}  // namespace dynq
