#include "dynq/dyngraph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>

#include "text_util.hpp"

namespace dynq {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::uint32_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0u); }

  std::uint32_t find(std::uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::uint32_t> parent_;
};

bool is_connected(std::uint32_t n, const std::vector<Edge>& edges) {
  return connected_components(n, edges).size() <= 1;
}

}  // namespace

RoundGraph RoundGraph::from_edges(std::uint32_t n, Round round, std::vector<Edge> edges) {
  for (auto& e : edges) e = Edge::normalized(e.u, e.v);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return RoundGraph{n, round, std::move(edges)};
}

std::vector<std::vector<NodeId>> RoundGraph::adjacency() const {
  std::vector<std::vector<NodeId>> adj(n);
  for (const auto& e : edges) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  return adj;
}

bool RoundGraph::has_edge(NodeId a, NodeId b) const {
  return std::binary_search(edges.begin(), edges.end(), Edge::normalized(a, b));
}

std::string GraphViolation::describe() const {
  std::ostringstream os;
  if (kind == Kind::MalformedEdge) {
    os << "MalformedEdge(" << edge.u << "," << edge.v << ")";
    return os.str();
  }
  os << "Disconnected(";
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (i) os << ",";
    os << "{";
    for (std::size_t j = 0; j < components[i].size(); ++j) {
      if (j) os << ",";
      os << components[i][j];
    }
    os << "}";
  }
  os << ")";
  return os.str();
}

std::vector<std::vector<NodeId>> connected_components(std::uint32_t n, const std::vector<Edge>& edges) {
  DisjointSets ds(n);
  for (const auto& e : edges) ds.unite(e.u, e.v);
  std::vector<std::vector<NodeId>> comps;
  std::vector<int> slot(n, -1);
  for (NodeId v = 0; v < n; ++v) {
    auto root = ds.find(v);
    if (slot[root] < 0) {
      slot[root] = static_cast<int>(comps.size());
      comps.emplace_back();
    }
    comps[slot[root]].push_back(v);
  }
  return comps;
}

std::optional<GraphViolation> validate_round_graph(const RoundGraph& g) {
  if (g.n == 0) throw std::invalid_argument("round graph needs n >= 1");
  std::set<Edge> seen;
  for (const auto& e : g.edges) {
    if (e.u >= g.n || e.v >= g.n || e.u == e.v || !seen.insert(Edge::normalized(e.u, e.v)).second) {
      return GraphViolation{GraphViolation::Kind::MalformedEdge, {}, e};
    }
  }
  auto comps = connected_components(g.n, g.edges);
  if (comps.size() > 1) {
    comps.erase(comps.begin());
    return GraphViolation{GraphViolation::Kind::Disconnected, std::move(comps), {}};
  }
  return std::nullopt;
}

namespace {

std::vector<Edge> intersect_window(const GraphTrace& trace, std::size_t start, std::uint32_t T) {
  std::vector<Edge> acc = RoundGraph::from_edges(trace.n, 0, trace.rounds[start].edges).edges;
  for (std::size_t r = start + 1; r < start + T; ++r) {
    auto next = RoundGraph::from_edges(trace.n, 0, trace.rounds[r].edges).edges;
    std::vector<Edge> out;
    std::set_intersection(acc.begin(), acc.end(), next.begin(), next.end(), std::back_inserter(out));
    acc = std::move(out);
  }
  return acc;
}

}  // namespace

bool check_T_interval(const GraphTrace& trace, std::uint32_t T) {
  if (T == 0) throw std::invalid_argument("T must be positive");
  if (trace.rounds.size() < T) return true;
  for (std::size_t r = 0; r + T <= trace.rounds.size(); ++r) {
    if (!is_connected(trace.n, intersect_window(trace, r, T))) return false;
  }
  return true;
}

bool check_T_interval_aligned(const GraphTrace& trace, std::uint32_t T) {
  if (T == 0) throw std::invalid_argument("T must be positive");
  for (std::size_t r = 0; r + T <= trace.rounds.size(); r += T) {
    if (!is_connected(trace.n, intersect_window(trace, r, T))) return false;
  }
  return true;
}

std::uint32_t hop_dist(const RoundGraph& g, NodeId u, NodeId v) {
  if (u >= g.n || v >= g.n) throw std::out_of_range("hop_dist: node out of range");
  if (u == v) return 0;
  auto adj = g.adjacency();
  std::vector<std::int64_t> dist(g.n, -1);
  std::queue<NodeId> frontier;
  dist[u] = 0;
  frontier.push(u);
  while (!frontier.empty()) {
    auto x = frontier.front();
    frontier.pop();
    for (auto y : adj[x]) {
      if (dist[y] >= 0) continue;
      dist[y] = dist[x] + 1;
      if (y == v) return static_cast<std::uint32_t>(dist[y]);
      frontier.push(y);
    }
  }
  throw std::domain_error("hop_dist: nodes are not connected");
}

std::string format_edges(const std::vector<Edge>& edges) {
  std::string out;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(edges[i].u);
    out += '-';
    out += std::to_string(edges[i].v);
  }
  return out;
}

std::vector<Edge> parse_edges(std::string_view text) {
  std::vector<Edge> edges;
  text = detail::trim(text);
  if (text.empty()) return edges;
  for (auto item : detail::split(text, ',')) {
    auto dash = item.find('-');
    if (dash == std::string_view::npos) throw ParseError("bad edge: " + std::string(item));
    edges.push_back(Edge{detail::parse_uint<NodeId>(item.substr(0, dash)),
                         detail::parse_uint<NodeId>(item.substr(dash + 1))});
  }
  return edges;
}

std::string format_graph_trace(const GraphTrace& trace) {
  std::string out = "n=" + std::to_string(trace.n) + " rounds=" + std::to_string(trace.rounds.size()) + "\n";
  for (const auto& g : trace.rounds) {
    auto sorted = RoundGraph::from_edges(g.n, g.round, g.edges);
    out += "r=" + std::to_string(g.round) + ":";
    if (!sorted.edges.empty()) out += " " + format_edges(sorted.edges);
    out += "\n";
  }
  return out;
}

GraphTrace parse_graph_trace(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty graph trace");
  GraphTrace trace;
  std::size_t rounds = 0;
  {
    auto fields = detail::split(detail::trim(line), ' ');
    if (fields.size() != 2 || !fields[0].starts_with("n=") || !fields[1].starts_with("rounds=")) {
      throw ParseError("bad graph trace header: " + line);
    }
    trace.n = detail::parse_uint<std::uint32_t>(fields[0].substr(2));
    rounds = detail::parse_uint<std::size_t>(fields[1].substr(7));
  }
  while (std::getline(in, line)) {
    auto sv = detail::trim(line);
    if (sv.empty()) continue;
    auto colon = sv.find(':');
    if (!sv.starts_with("r=") || colon == std::string_view::npos) throw ParseError("bad round line: " + line);
    auto r = detail::parse_uint<Round>(sv.substr(2, colon - 2));
    if (r != trace.rounds.size()) throw ParseError("rounds must be consecutive from 0");
    trace.rounds.push_back(RoundGraph{trace.n, r, parse_edges(sv.substr(colon + 1))});
  }
  if (trace.rounds.size() != rounds) throw ParseError("round count does not match header");
  return trace;
}

}  // namespace dynq
