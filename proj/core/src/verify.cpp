#include "dynq/verify.hpp"

#include <algorithm>
#include <cstdint>
#include <sstream>

#include "dynq/budget.hpp"
#include "dynq/protocol.hpp"

namespace dynq {

namespace {

const char* status_token(CheckStatus s) { return s == CheckStatus::Pass ? "PASS" : "FAIL"; }

std::string join(const std::vector<NodeId>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(ids[i]);
  }
  return out;
}

// Walks Node(.) links from the head as far as they go, without judging how
// the walk ends. Stops on a repeat or an out-of-range link.
std::vector<NodeId> walk_chain(std::span<const SuccValue> succ, NodeId head) {
  std::vector<NodeId> chain{head};
  std::vector<bool> seen(succ.size(), false);
  seen[head] = true;
  NodeId cur = head;
  while (succ[cur].is_node()) {
    auto next = succ[cur].target();
    if (next >= succ.size() || seen[next]) break;
    seen[next] = true;
    chain.push_back(next);
    cur = next;
  }
  return chain;
}

std::vector<NodeId> enqueue_order(const Trace& trace) {
  std::vector<NodeId> out;
  for (const auto& e : trace.events) {
    if (e.kind == EventKind::Enqueue) out.push_back(e.request.origin);
  }
  return out;
}

std::vector<NodeId> init_order(const Trace& trace) {
  std::vector<NodeId> out;
  for (const auto& e : trace.events) {
    if (e.kind == EventKind::RequestInit) out.push_back(e.node);
  }
  return out;
}

int kind_rank(EventKind k) {
  switch (k) {
    case EventKind::RequestInit: return 0;
    case EventKind::Send: return 1;
    case EventKind::Graph: return 2;
    case EventKind::Recv: return 3;
    case EventKind::Enqueue:
    case EventKind::Cancel: return 4;
    case EventKind::SuccChange: return 5;
    case EventKind::Terminate: return 6;
  }
  return 7;
}

// First round at which each node knew each request (issuing or receiving it).
using KnowledgeMap = std::map<QueueRequest, std::vector<std::optional<Round>>>;

KnowledgeMap knowledge(const Trace& trace) {
  KnowledgeMap known;
  auto note = [&](const QueueRequest& q, NodeId node, Round round) {
    auto& row = known[q];
    if (row.empty()) row.resize(trace.header.n);
    if (node < row.size() && !row[node]) row[node] = round;
  };
  for (const auto& e : trace.events) {
    if (e.kind == EventKind::RequestInit) note(e.request, e.node, e.round);
    if (e.kind == EventKind::Recv && e.message.is_queue()) note(e.message.request(), e.node, e.round);
  }
  return known;
}

bool disseminated(const Trace& trace, const KnowledgeMap& known, std::uint64_t cycle) {
  const auto& h = trace.header;
  const Round len = trace.cycle_length();
  if (len == 0) return true;
  const Round start = cycle * len;
  const Round checkpoint = h.algorithm == Algorithm::Alg1 ? start + h.n - 1 : start + len - 1;
  if (checkpoint >= trace.rounds_executed) return true;

  auto active = active_at(trace, start);
  if (active.empty()) return true;
  std::size_t wanted = 1;
  if (h.algorithm == Algorithm::Alg2) wanted = std::min<std::size_t>(active.size(), h.T);

  auto it = active.begin();
  for (std::size_t i = 0; i < wanted; ++i, ++it) {
    auto row = known.find(*it);
    if (row == known.end()) return false;
    for (const auto& when : row->second) {
      if (!when || *when > checkpoint) return false;
    }
  }
  return true;
}

}  // namespace

// --- queue extraction ------------------------------------------------------

QueueOrder extract_queue(std::span<const SuccValue> succ, NodeId head) {
  if (head >= succ.size()) throw std::out_of_range("head outside succ map");
  QueueOrder q;
  q.nodes.push_back(head);
  q.enqueued_at.emplace_back();
  std::vector<bool> seen(succ.size(), false);
  seen[head] = true;
  NodeId cur = head;
  while (true) {
    const auto& s = succ[cur];
    if (s.is_bottom()) return q;
    if (s.is_infinity()) {
      throw QueueError(QueueError::Kind::NoTail, q.nodes, "NoTail: chain " + join(q.nodes) + " ends at INF");
    }
    const auto next = s.target();
    if (next >= succ.size()) {
      throw QueueError(QueueError::Kind::DanglingSuccessor, q.nodes,
                       "DanglingSuccessor: node " + std::to_string(cur) + " points at " + std::to_string(next));
    }
    if (seen[next]) {
      auto path = q.nodes;
      path.push_back(next);
      throw QueueError(QueueError::Kind::CycleDetected, path, "CycleDetected: " + join(path));
    }
    seen[next] = true;
    q.nodes.push_back(next);
    q.enqueued_at.emplace_back();
    cur = next;
  }
}

std::vector<SuccValue> final_succ(const Trace& trace) {
  std::vector<SuccValue> succ(trace.header.n, SuccValue::infinity());
  if (trace.header.head < succ.size()) succ[trace.header.head] = SuccValue::bottom();
  for (const auto& e : trace.events) {
    if (e.kind == EventKind::SuccChange && e.node < succ.size()) succ[e.node] = e.after;
  }
  return succ;
}

// --- report ----------------------------------------------------------------

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.status == CheckStatus::Pass; });
}

bool Report::unsound() const {
  return std::any_of(checks.begin(), checks.end(), [](const auto& c) { return c.status == CheckStatus::Fail; });
}

const CheckResult* Report::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

void Report::add(std::string name, CheckStatus status, std::string detail) {
  checks.push_back({std::move(name), status, std::move(detail)});
}

void Report::merge(const Report& other) { checks.insert(checks.end(), other.checks.begin(), other.checks.end()); }

std::string Report::format() const {
  std::string out;
  for (const auto& c : checks) {
    out += "CHECK " + c.name + " " + status_token(c.status) + " detail=";
    if (c.status == CheckStatus::Incomplete) out += "incomplete: ";
    out += c.detail + "\n";
  }
  return out;
}

// --- exactly once ----------------------------------------------------------

Report check_exactly_once(const Trace& trace, const std::vector<ScheduleEntry>& scheduled) {
  Report report;
  std::map<NodeId, std::size_t> counts;
  for (auto origin : enqueue_order(trace)) ++counts[origin];

  std::vector<NodeId> missing;
  for (const auto& s : scheduled) {
    if (!counts.contains(s.issuer)) missing.push_back(s.issuer);
  }
  if (missing.empty()) {
    report.add("eventual_enqueue", CheckStatus::Pass);
  } else {
    report.add("eventual_enqueue", trace.completed ? CheckStatus::Fail : CheckStatus::Incomplete,
               "never enqueued: " + join(missing));
  }

  std::vector<NodeId> duplicated;
  std::vector<NodeId> unknown;
  for (const auto& [origin, count] : counts) {
    if (count > 1) duplicated.push_back(origin);
    bool listed = std::any_of(scheduled.begin(), scheduled.end(), [&](const auto& s) { return s.issuer == origin; });
    if (!listed) unknown.push_back(origin);
  }
  if (duplicated.empty() && unknown.empty()) {
    report.add("enqueued_at_most_once", CheckStatus::Pass);
  } else {
    report.add("enqueued_at_most_once", CheckStatus::Fail,
               "duplicated: " + join(duplicated) + " unscheduled: " + join(unknown));
  }

  const auto succ = final_succ(trace);
  const auto events = enqueue_order(trace);
  const auto chain = walk_chain(succ, trace.header.head);
  std::vector<NodeId> after_head(chain.begin() + 1, chain.end());
  bool complete_chain = true;
  try {
    extract_queue(succ, trace.header.head);
  } catch (const QueueError&) {
    complete_chain = false;
  }
  if (after_head == events && complete_chain) {
    report.add("queue_matches_enqueue_order", CheckStatus::Pass);
  } else if (!trace.completed && events.size() >= after_head.size() &&
             std::equal(after_head.begin(), after_head.end(), events.begin())) {
    report.add("queue_matches_enqueue_order", CheckStatus::Incomplete, "queue still forming: " + join(chain));
  } else {
    report.add("queue_matches_enqueue_order", CheckStatus::Fail,
               "queue " + join(chain) + " vs enqueue events " + join(events));
  }
  return report;
}

Report check_exactly_once(const Trace& trace) {
  std::vector<ScheduleEntry> scheduled;
  for (const auto& e : trace.events) {
    if (e.kind == EventKind::RequestInit) scheduled.push_back({e.round, e.node});
  }
  return check_exactly_once(trace, scheduled);
}

// --- taillessness ----------------------------------------------------------

std::vector<TaillessSpan> tailless_spans(const Trace& trace) {
  std::vector<TaillessSpan> spans;
  const auto n = trace.header.n;
  std::vector<SuccValue> succ(n, SuccValue::infinity());
  std::size_t bottoms = 0;
  if (trace.header.head < n) {
    succ[trace.header.head] = SuccValue::bottom();
    bottoms = 1;
  }
  std::size_t idx = 0;
  std::optional<TaillessSpan> open;
  for (Round r = 0; r < trace.rounds_executed; ++r) {
    for (; idx < trace.events.size() && trace.events[idx].round <= r; ++idx) {
      const auto& e = trace.events[idx];
      if (e.kind != EventKind::SuccChange || e.node >= n) continue;
      if (succ[e.node].is_bottom()) --bottoms;
      succ[e.node] = e.after;
      if (e.after.is_bottom()) ++bottoms;
    }
    if (bottoms == 0) {
      if (!open) open = TaillessSpan{r, 0, false};
      ++open->length;
    } else if (open) {
      spans.push_back(*open);
      open.reset();
    }
  }
  if (open) {
    open->truncated = true;
    spans.push_back(*open);
  }
  return spans;
}

// --- influence -------------------------------------------------------------

namespace {

class Bitset {
 public:
  explicit Bitset(std::size_t n) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
  void merge(const Bitset& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(__builtin_popcountll(w));
    return c;
  }

 private:
  std::vector<std::uint64_t> words_;
};

// heard[v] = {w : (w,0) ~> (v,r)} after applying graphs [0, r).
std::vector<Bitset> heard_after(const GraphTrace& h, Round r) {
  std::vector<Bitset> heard(h.n, Bitset(h.n));
  for (NodeId v = 0; v < h.n; ++v) heard[v].set(v);
  for (Round i = 0; i < r; ++i) {
    auto next = heard;
    for (const auto& e : h.rounds[i].edges) {
      next[e.u].merge(heard[e.v]);
      next[e.v].merge(heard[e.u]);
    }
    heard = std::move(next);
  }
  return heard;
}

void require_round(const GraphTrace& h, NodeId u, Round r) {
  if (u >= h.n) throw std::out_of_range("influence: node out of range");
  if (r > h.rounds.size()) throw std::out_of_range("influence: round beyond trace");
}

}  // namespace

std::size_t influence_out(const GraphTrace& history, NodeId u, Round r) {
  require_round(history, u, r);
  auto heard = heard_after(history, r);
  std::size_t c = 0;
  for (NodeId v = 0; v < history.n; ++v) c += heard[v].test(u) ? 1 : 0;
  return c;
}

std::size_t influence_in(const GraphTrace& history, NodeId u, Round r) {
  require_round(history, u, r);
  return heard_after(history, r)[u].count();
}

bool influence_growth(const GraphTrace& history, NodeId u, Round r) {
  const auto floor = std::min<std::size_t>(r + 1, history.n);
  return influence_out(history, u, r) >= floor && influence_in(history, u, r) >= floor;
}

bool influence_growth_all(const GraphTrace& history) {
  const auto n = history.n;
  std::vector<Bitset> heard(n, Bitset(n));
  for (NodeId v = 0; v < n; ++v) heard[v].set(v);
  for (Round r = 0;; ++r) {
    const auto floor = std::min<std::size_t>(r + 1, n);
    std::vector<std::size_t> out(n, 0);
    for (NodeId v = 0; v < n; ++v) {
      if (heard[v].count() < floor) return false;
      for (NodeId w = 0; w < n; ++w) out[w] += heard[v].test(w) ? 1 : 0;
    }
    if (std::any_of(out.begin(), out.end(), [&](auto c) { return c < floor; })) return false;
    if (r == history.rounds.size()) return true;
    // sets only grow, so once every node has heard from everyone nothing can fail
    if (floor == n && std::all_of(out.begin(), out.end(), [&](auto c) { return c == n; })) return true;
    auto next = heard;
    for (const auto& e : history.rounds[r].edges) {
      next[e.u].merge(heard[e.v]);
      next[e.v].merge(heard[e.u]);
    }
    heard = std::move(next);
  }
}

// --- dissemination ---------------------------------------------------------

std::set<QueueRequest> active_at(const Trace& trace, Round round) {
  std::set<QueueRequest> active;
  for (const auto& e : trace.events) {
    if (e.round > round) break;
    if (e.kind == EventKind::RequestInit) active.insert(e.request);
    if (e.kind == EventKind::Enqueue && e.round < round) active.erase(e.request);
  }
  return active;
}

bool dissemination_check(const Trace& trace, std::uint64_t cycle) {
  return disseminated(trace, knowledge(trace), cycle);
}

// --- metrics ---------------------------------------------------------------

Metrics compute_metrics(const Trace& trace) {
  Metrics m;
  m.completed = trace.completed;
  m.rounds_total = trace.rounds_executed;
  if (trace.completed) m.completion_round = trace.rounds_executed;

  for (const auto& e : trace.events) {
    if (e.kind == EventKind::Enqueue) {
      m.enqueue_round.emplace(e.request.origin, e.round);
      ++m.enqueue_count;
    }
    if (e.kind == EventKind::Send && e.message.is_queue()) m.visited.insert(e.node);
  }

  const Round len = trace.cycle_length();
  if (len > 0) {
    m.cycles_used = (trace.rounds_executed + len - 1) / len;
    for (std::uint64_t c = 0; c < m.cycles_used; ++c) {
      const auto beta = static_cast<std::uint32_t>(active_at(trace, c * len).size());
      const std::uint32_t cap = trace.header.algorithm == Algorithm::Alg2 ? trace.header.T : 1;
      m.cycle_beta.push_back(beta);
      m.cycle_gamma.push_back(std::min(beta, cap));
      if (beta >= 1 && (m.alpha == 0 || beta < m.alpha)) m.alpha = beta;
    }
  }
  for (const auto& s : tailless_spans(trace)) m.max_tailless_span = std::max(m.max_tailless_span, s.length);
  return m;
}

// --- structural checks -----------------------------------------------------

CheckResult check_round_structure(const Trace& trace) {
  const auto n = trace.header.n;
  CheckResult res{"round_structure", CheckStatus::Pass, "ok"};
  auto fail = [&](Round r, const std::string& why) {
    res.status = CheckStatus::Fail;
    res.detail = "round " + std::to_string(r) + ": " + why;
    return res;
  };

  std::size_t idx = 0;
  for (Round r = 0; r < trace.rounds_executed; ++r) {
    std::vector<std::optional<Message>> sent(n);
    std::optional<RoundGraph> graph;
    int last_rank = -1;
    for (; idx < trace.events.size() && trace.events[idx].round == r; ++idx) {
      const auto& e = trace.events[idx];
      const int rank = kind_rank(e.kind);
      if (rank < last_rank) return fail(r, std::string("event ") + to_string(e.kind) + " out of order");
      last_rank = rank;
      if (e.kind != EventKind::Graph && e.node >= n) return fail(r, "node id out of range");
      switch (e.kind) {
        case EventKind::Send:
          if (sent[e.node]) return fail(r, "node " + std::to_string(e.node) + " sent twice");
          sent[e.node] = e.message;
          break;
        case EventKind::Graph:
          if (graph) return fail(r, "two graphs");
          if (std::any_of(sent.begin(), sent.end(), [](const auto& s) { return !s; })) {
            return fail(r, "graph chosen before every node fixed its message");
          }
          graph = RoundGraph::from_edges(n, r, e.edges);
          if (auto bad = validate_round_graph(RoundGraph{n, r, e.edges})) return fail(r, bad->describe());
          break;
        case EventKind::Recv:
          if (!graph || !graph->has_edge(e.from, e.node)) return fail(r, "delivery without an edge");
          if (e.from >= n || !sent[e.from] || !(*sent[e.from] == e.message)) return fail(r, "delivery does not match send");
          break;
        default:
          break;
      }
    }
    if (!graph) return fail(r, "no graph recorded");
  }
  if (idx != trace.events.size()) return fail(trace.events[idx].round, "events beyond the last executed round");
  return res;
}

CheckResult check_succ_transitions(const Trace& trace) {
  const auto n = trace.header.n;
  std::vector<SuccValue> succ(n, SuccValue::infinity());
  if (trace.header.head < n) succ[trace.header.head] = SuccValue::bottom();
  const bool direct_link_ok = trace.header.algorithm == Algorithm::Alg2;
  for (const auto& e : trace.events) {
    if (e.kind != EventKind::SuccChange) continue;
    auto fail = [&](const std::string& why) {
      return CheckResult{"succ_transitions", CheckStatus::Fail,
                         "round " + std::to_string(e.round) + " node " + std::to_string(e.node) + ": " + why};
    };
    if (e.node >= n) return fail("node out of range");
    if (!(succ[e.node] == e.before)) return fail("recorded prior value disagrees with replay");
    const bool legal = (e.before.is_infinity() && e.after.is_bottom()) ||
                       (e.before.is_bottom() && e.after.is_node()) ||
                       (direct_link_ok && e.before.is_infinity() && e.after.is_node());
    if (!legal) return fail(to_string(e.before) + "->" + to_string(e.after) + " is not a legal transition");
    if (e.after.is_node() && e.after.target() == e.node) return fail("points at itself");
    succ[e.node] = e.after;
  }
  return {"succ_transitions", CheckStatus::Pass, "ok"};
}

CheckResult check_taillessness(const Trace& trace) {
  const Round n = trace.header.n;
  Round worst = 0;
  for (const auto& s : tailless_spans(trace)) {
    worst = std::max(worst, s.length);
    const bool exact_needed = trace.header.algorithm == Algorithm::Alg1 && !s.truncated;
    if (s.length > n || (exact_needed && s.length != n)) {
      return {"tailless_span", CheckStatus::Fail,
              "span at round " + std::to_string(s.start) + " lasted " + std::to_string(s.length) + " rounds, n=" +
                  std::to_string(n)};
    }
  }
  return {"tailless_span", CheckStatus::Pass, "max=" + std::to_string(worst)};
}

CheckResult check_dissemination(const Trace& trace) {
  const Round len = trace.cycle_length();
  if (len == 0) return {"dissemination", CheckStatus::Pass, "not applicable"};
  const auto known = knowledge(trace);
  const std::uint64_t cycles = (trace.rounds_executed + len - 1) / len;
  for (std::uint64_t c = 0; c < cycles; ++c) {
    if (!disseminated(trace, known, c)) {
      return {"dissemination", CheckStatus::Fail, "cycle " + std::to_string(c)};
    }
  }
  return {"dissemination", CheckStatus::Pass, std::to_string(cycles) + " cycles"};
}

CheckResult check_influence(const Trace& trace) {
  if (influence_growth_all(trace.graph_history())) return {"influence_growth", CheckStatus::Pass, "ok"};
  return {"influence_growth", CheckStatus::Fail, "some influence set grew by less than one node per round"};
}

CheckResult check_budget(const Trace& trace) {
  for (const auto& e : trace.events) {
    if (e.kind != EventKind::Send) continue;
    if (auto excess = check_message_budget(e.message, trace.header.n, trace.header.horizon)) {
      return {"message_budget", CheckStatus::Fail,
              "round " + std::to_string(e.round) + " node " + std::to_string(e.node) + " used " +
                  std::to_string(excess->bits) + " of " + std::to_string(excess->budget) + " bits"};
    }
  }
  return {"message_budget", CheckStatus::Pass, "budget=" + std::to_string(budget_bits(trace.header.n, trace.header.horizon))};
}

CheckResult check_queue_chain(const Trace& trace) {
  try {
    auto q = extract_queue(final_succ(trace), trace.header.head);
    return {"queue_chain", CheckStatus::Pass, "length=" + std::to_string(q.nodes.size())};
  } catch (const QueueError& err) {
    const bool liveness_only = err.kind() == QueueError::Kind::NoTail && !trace.completed;
    return {"queue_chain", liveness_only ? CheckStatus::Incomplete : CheckStatus::Fail, err.what()};
  }
}

std::optional<CheckResult> check_order(const Trace& trace, const ScheduleKind& schedule) {
  std::vector<NodeId> expected;
  std::string name;
  const auto algo = trace.header.algorithm;
  if (schedule.type == ScheduleType::Sequential && algo != Algorithm::NoRep) {
    name = "sequential_order";
    expected = init_order(trace);
  } else if (schedule.type == ScheduleType::Concurrent &&
             (algo == Algorithm::Alg2 ||
              (algo == Algorithm::Alg1 && trace.header.policy == EnqueuePolicy::LexSmallest))) {
    name = "concurrent_uid_order";
    expected = init_order(trace);
    std::sort(expected.begin(), expected.end());
  } else {
    return std::nullopt;
  }

  const auto chain = walk_chain(final_succ(trace), trace.header.head);
  std::vector<NodeId> got(chain.begin() + 1, chain.end());
  if (got == expected) return CheckResult{name, CheckStatus::Pass, join(got)};
  const bool prefix = got.size() < expected.size() && std::equal(got.begin(), got.end(), expected.begin());
  if (prefix && !trace.completed) return CheckResult{name, CheckStatus::Incomplete, join(got)};
  return CheckResult{name, CheckStatus::Fail, "queue " + join(got) + " expected " + join(expected)};
}

Report verify_trace(const Trace& trace, const VerifyOptions& options) {
  Report report = options.scheduled ? check_exactly_once(trace, *options.scheduled) : check_exactly_once(trace);
  auto push = [&](CheckResult c) { report.checks.push_back(std::move(c)); };
  push(check_queue_chain(trace));
  push(check_round_structure(trace));
  push(check_succ_transitions(trace));
  push(check_budget(trace));
  if (trace.header.algorithm != Algorithm::NoRep) {
    push(check_taillessness(trace));
    push(check_dissemination(trace));
  }
  push(check_influence(trace));
  if (options.schedule) {
    if (auto c = check_order(trace, *options.schedule)) push(std::move(*c));
  }
  return report;
}

}  // namespace dynq
