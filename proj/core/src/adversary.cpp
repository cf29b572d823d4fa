#include "dynq/adversary.hpp"

#include <algorithm>
#include <random>

#include "text_util.hpp"

namespace dynq {

namespace {

std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

constexpr std::uint64_t kTreeStream = 1;
constexpr std::uint64_t kExtraStream = 2;

std::vector<Edge> path_edges(const std::vector<NodeId>& order) {
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < order.size(); ++i) edges.push_back(Edge::normalized(order[i - 1], order[i]));
  return edges;
}

std::optional<NodeId> find_tail(std::span<const SuccValue> succ) {
  for (NodeId u = 0; u < succ.size(); ++u) {
    if (succ[u].is_bottom()) return u;
  }
  return std::nullopt;
}

// Holders of the smallest in-flight QUEUE message (or, failing that, the
// smallest CANCEL) at one end; the node the message must reach at the other.
// Only the last holder touches a non-holder, so one new node learns the
// message per round.
std::vector<Edge> adaptive_line(std::uint32_t n, const NetworkView& view) {
  std::optional<QueueRequest> min_queue;
  std::optional<NodeId> min_cancel;
  for (const auto& m : view.pending) {
    if (m.is_queue() && (!min_queue || m.request() < *min_queue)) min_queue = m.request();
    if (m.is_cancel() && (!min_cancel || m.cancel_target() < *min_cancel)) min_cancel = m.cancel_target();
  }

  std::vector<bool> holder(n, false);
  std::optional<NodeId> far_end = find_tail(view.succ);
  if (min_queue) {
    for (NodeId u = 0; u < n; ++u) holder[u] = view.pending[u] == Message::queue(*min_queue);
  } else if (min_cancel) {
    for (NodeId u = 0; u < n; ++u) holder[u] = view.pending[u] == Message::cancel(*min_cancel);
    far_end = *min_cancel;
  }
  if (far_end && holder[*far_end]) far_end.reset();

  std::vector<NodeId> order;
  order.reserve(n);
  for (NodeId u = 0; u < n; ++u) {
    if (holder[u]) order.push_back(u);
  }
  for (NodeId u = 0; u < n; ++u) {
    if (!holder[u] && u != far_end) order.push_back(u);
  }
  if (far_end) order.push_back(*far_end);
  return path_edges(order);
}

// Confines a lone QUEUE message to its origin w and one fixed partner x.
std::vector<Edge> trap(std::uint32_t n, const NetworkView& view) {
  std::optional<NodeId> holder;
  for (NodeId u = 0; u < n; ++u) {
    if (!view.pending[u].is_queue()) continue;
    if (holder) return complete_edges(n);  // more than one copy: not trackable
    holder = u;
  }
  if (!holder || n < 2) return complete_edges(n);

  const NodeId origin = view.pending[*holder].request().origin;
  const auto tail = find_tail(view.succ);
  NodeId partner = origin;
  if (*holder == origin) {
    partner = *holder;
    for (NodeId u = 0; u < n; ++u) {
      if (u != origin && u != tail) {
        partner = u;
        break;
      }
    }
    if (partner == *holder) partner = (*holder + 1) % n;
  }

  std::vector<Edge> edges{Edge::normalized(*holder, partner)};
  for (NodeId v = 0; v < n; ++v) {
    if (v != *holder && v != partner) edges.push_back(Edge::normalized(partner, v));
  }
  return edges;
}

}  // namespace

std::vector<Edge> complete_edges(std::uint32_t n) {
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) edges.push_back({u, v});
  }
  return edges;
}

std::vector<Edge> random_connected_edges(std::uint32_t n, std::uint64_t seed, std::uint64_t tree_index,
                                         std::uint64_t extra_index, double p) {
  std::vector<Edge> edges;
  if (n <= 1) return edges;

  auto rng = make_stream(seed, kTreeStream, tree_index);
  std::uniform_int_distribution<NodeId> any(0, n - 1);
  std::uniform_int_distribution<NodeId> other(0, n - 2);
  std::vector<bool> visited(n, false);
  NodeId current = any(rng);
  visited[current] = true;
  std::uint32_t count = 1;
  while (count < n) {
    NodeId next = other(rng);
    if (next >= current) ++next;
    if (!visited[next]) {
      visited[next] = true;
      ++count;
      edges.push_back(Edge::normalized(current, next));
    }
    current = next;
  }

  if (p > 0.0) {
    auto extra_rng = make_stream(seed, kExtraStream, extra_index);
    std::bernoulli_distribution coin(p);
    std::sort(edges.begin(), edges.end());
    auto tree = edges;
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        if (coin(extra_rng) && !std::binary_search(tree.begin(), tree.end(), Edge{u, v})) {
          edges.push_back({u, v});
        }
      }
    }
  }
  return edges;
}

RoundGraph adversary_next_edges(const AdversaryKind& kind, const GraphTrace& history,
                                std::optional<NetworkView> view, Round round) {
  const auto n = history.n;
  if (kind.is_adaptive()) {
    if (!view) throw AdaptivityUnavailable(to_string(kind) + " needs this round's pending messages");
    if (view->pending.size() != n || view->succ.size() != n) {
      throw std::invalid_argument("network view must cover every node");
    }
  }

  std::vector<Edge> edges;
  switch (kind.type) {
    case AdversaryType::StaticComplete:
      edges = complete_edges(n);
      break;
    case AdversaryType::ObliviousRandom:
      edges = random_connected_edges(n, kind.seed, round, round, kind.edge_prob);
      break;
    case AdversaryType::TStable:
      if (kind.T == 0) throw std::invalid_argument("TStable requires T >= 1");
      edges = random_connected_edges(n, kind.seed, round / kind.T, round, kind.edge_prob);
      break;
    case AdversaryType::AdaptiveLine:
      edges = adaptive_line(n, *view);
      break;
    case AdversaryType::Trap:
      edges = trap(n, *view);
      break;
  }
  return RoundGraph::from_edges(n, round, std::move(edges));
}

std::string to_string(const AdversaryKind& kind) {
  switch (kind.type) {
    case AdversaryType::StaticComplete: return "StaticComplete";
    case AdversaryType::ObliviousRandom: return "ObliviousRandom";
    case AdversaryType::TStable:
      return kind.T == 0 ? "TStable" : "TStable(" + std::to_string(kind.T) + ")";
    case AdversaryType::AdaptiveLine: return "AdaptiveLine";
    case AdversaryType::Trap: return "Trap";
  }
  return "?";
}

AdversaryKind parse_adversary(std::string_view text) {
  text = detail::trim(text);
  if (text == "StaticComplete") return AdversaryKind::static_complete();
  if (text == "ObliviousRandom") return AdversaryKind::oblivious_random(0);
  if (text == "AdaptiveLine") return AdversaryKind::adaptive_line();
  if (text == "Trap") return AdversaryKind::trap();
  if (text == "TStable") return AdversaryKind::t_stable(0, 0);
  if (text.starts_with("TStable(") && text.ends_with(")")) {
    auto T = detail::parse_uint<std::uint32_t>(text.substr(8, text.size() - 9));
    if (T == 0) throw ParseError("TStable requires T >= 1");
    return AdversaryKind::t_stable(T, 0);
  }
  throw ParseError("unknown adversary '" + std::string(text) + "'");
}

}  // namespace dynq
