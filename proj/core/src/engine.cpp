#include "dynq/engine.hpp"

#include <algorithm>

#include "text_util.hpp"

namespace dynq {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<Message> gather(const std::vector<NodeId>& neighbors, const std::vector<Message>& msgs) {
  std::vector<Message> out;
  out.reserve(neighbors.size());
  for (auto w : neighbors) out.push_back(msgs[w]);
  return out;
}

}  // namespace

const char* to_string(Termination t) { return t == Termination::OracleStop ? "OracleStop" : "IdleDetect"; }

Termination parse_termination(std::string_view text) {
  text = detail::trim(text);
  if (text == "OracleStop") return Termination::OracleStop;
  if (text == "IdleDetect") return Termination::IdleDetect;
  throw ParseError("unknown termination '" + std::string(text) + "'");
}

EnqueuePolicy parse_policy(std::string_view text) {
  text = detail::trim(text);
  if (text == "FirstArrival") return EnqueuePolicy::FirstArrival;
  if (text == "LexSmallest") return EnqueuePolicy::LexSmallest;
  throw ParseError("unknown policy '" + std::string(text) + "'");
}

// --- configuration ---------------------------------------------------------

void ScenarioConfig::validate() const {
  if (n == 0) throw ConfigError("n", "need at least one node");
  if (head >= n) throw ConfigError("head", "head " + std::to_string(head) + " is not a node of n=" + std::to_string(n));
  if (k > n - 1) {
    throw ConfigError("k", "k=" + std::to_string(k) + " exceeds n-1=" + std::to_string(n - 1) +
                               " (the head does not issue)");
  }
  if (T == 0) throw ConfigError("T", "T must be at least 1");
  if (algorithm == Algorithm::NoRep && k > 1) throw ConfigError("k", "NoRep carries a single request");
  if (termination == Termination::IdleDetect && algorithm != Algorithm::Alg1) {
    throw ConfigError("termination", "IdleDetect is defined for Alg1 only");
  }
  if (!(edge_prob >= 0.0 && edge_prob <= 1.0)) throw ConfigError("edge_prob", "must lie in [0, 1]");
}

Round ScenarioConfig::cycle_length() const {
  switch (algorithm) {
    case Algorithm::Alg1: return Round{2} * n;
    case Algorithm::Alg2: return Alg2Clock::cycle_length(n, T);
    case Algorithm::NoRep: return 1;
  }
  return 1;
}

Round ScenarioConfig::default_horizon() const {
  const Round kk = std::max<Round>(k, 1);
  Round h = 0;
  switch (algorithm) {
    case Algorithm::Alg1: h = 10 * Round{n} * kk; break;
    case Algorithm::Alg2: h = std::max(10 * Round{n} * kk, cycle_length() * (Round{k} + 1)); break;
    case Algorithm::NoRep: h = 10 * Round{n} * n; break;
  }
  if (schedule.type == ScheduleType::Dynamic) h += schedule.window;
  if (schedule.type == ScheduleType::Continuous) h += cycle_length() * ((k + schedule.rate - 1) / schedule.rate);
  return std::max<Round>(h, 1);
}

AdversaryKind ScenarioConfig::effective_adversary() const {
  AdversaryKind a = adversary;
  a.seed = seed;
  a.edge_prob = edge_prob;
  if (a.type == AdversaryType::TStable && a.T == 0) a.T = algorithm == Algorithm::Alg2 ? 2 * T : T;
  return a;
}

// --- world -----------------------------------------------------------------

World::World(ScenarioConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  const auto n = cfg_.n;
  adversary_ = cfg_.effective_adversary();
  horizon_ = cfg_.effective_horizon();
  schedule_ = make_schedule(cfg_.schedule, n, cfg_.k, splitmix64(cfg_.seed), cfg_.head, cfg_.cycle_length());

  trace_.header = TraceHeader{n, cfg_.algorithm, cfg_.T, cfg_.head, cfg_.policy, horizon_};
  history_.n = n;

  succ_.assign(n, SuccValue::infinity());
  succ_[cfg_.head] = SuccValue::bottom();
  for (NodeId v = 0; v < n; ++v) {
    const bool is_head = v == cfg_.head;
    switch (cfg_.algorithm) {
      case Algorithm::Alg1: alg1_.push_back(alg1_initial(v, is_head)); break;
      case Algorithm::Alg2: alg2_.push_back(alg2_initial(v, is_head)); break;
      case Algorithm::NoRep: norep_.push_back(norep_initial(v, is_head)); break;
    }
  }
  quiet_.assign(n, 0);
  terminate_.assign(n, false);
  if (cfg_.termination == Termination::OracleStop) check_oracle_stop();
  trace_.completed = completed_;
}

std::vector<Message> World::select_broadcasts(Round r) {
  const auto n = cfg_.n;
  std::vector<Message> msgs(n, Message::empty());
  for (NodeId v = 0; v < n; ++v) {
    if (terminate_[v]) {
      msgs[v] = Message::terminate();
      continue;
    }
    switch (cfg_.algorithm) {
      case Algorithm::Alg1:
        alg1_[v].clock = Alg1Clock::at(r, n);
        msgs[v] = alg1_select_broadcast(alg1_[v]);
        break;
      case Algorithm::Alg2:
        alg2_[v].clock = Alg2Clock::at(r, n, cfg_.T);
        msgs[v] = alg2_select_broadcast(alg2_[v]);
        alg2_[v] = alg2_record_broadcast(std::move(alg2_[v]), msgs[v]);
        break;
      case Algorithm::NoRep: msgs[v] = norep_select_broadcast(norep_[v]); break;
    }
  }
  return msgs;
}

void World::step_round() {
  if (done()) throw std::logic_error("step_round called on a finished world");
  const Round r = round_;
  const auto n = cfg_.n;

  // 1. inject
  for (const auto& entry : schedule_.due_at(r)) {
    const QueueRequest q{r, entry.issuer};
    const auto u = entry.issuer;
    switch (cfg_.algorithm) {
      case Algorithm::Alg1: alg1_[u] = alg1_inject(std::move(alg1_[u]), q); break;
      case Algorithm::Alg2: alg2_[u] = alg2_inject(std::move(alg2_[u]), q); break;
      case Algorithm::NoRep: norep_[u] = norep_inject(std::move(norep_[u]), q); break;
    }
    active_.insert(q);
    Event e;
    e.round = r;
    e.kind = EventKind::RequestInit;
    e.node = u;
    e.request = q;
    emit(std::move(e));
  }
  if (cfg_.algorithm == Algorithm::Alg2 && r % cfg_.cycle_length() == 0) {
    gamma_ = static_cast<std::uint32_t>(std::min<std::size_t>(active_.size(), cfg_.T));
  }

  // 2. broadcasts
  const auto msgs = select_broadcasts(r);
  for (NodeId v = 0; v < n; ++v) {
    if (auto excess = check_message_budget(msgs[v], n, horizon_)) throw BudgetViolation(v, *excess);
    Event e;
    e.round = r;
    e.kind = EventKind::Send;
    e.node = v;
    e.message = msgs[v];
    emit(std::move(e));
  }

  // 3. adversary
  std::optional<NetworkView> view;
  if (adversary_.is_adaptive()) view = NetworkView{msgs, succ_};
  auto graph = adversary_next_edges(adversary_, history_, view, r);
  graph.round = r;
  if (auto bad = validate_round_graph(graph)) throw AdversaryViolation(r, *bad);
  {
    Event e;
    e.round = r;
    e.kind = EventKind::Graph;
    e.edges = graph.edges;
    emit(std::move(e));
  }
  const auto adj = graph.adjacency();
  history_.rounds.push_back(std::move(graph));

  // 4. delivery
  for (NodeId v = 0; v < n; ++v) {
    for (auto w : adj[v]) {
      if (msgs[w].is_empty()) continue;
      Event e;
      e.round = r;
      e.kind = EventKind::Recv;
      e.node = v;
      e.from = w;
      e.message = msgs[w];
      emit(std::move(e));
    }
  }

  // 5. integration and boundaries
  integrate(r, adj, msgs);
  record_succ_changes(r);
  if (cfg_.termination == Termination::IdleDetect) idle_detect(r, adj, msgs);

  ++round_;
  trace_.rounds_executed = round_;
  if (cfg_.termination == Termination::OracleStop) check_oracle_stop();
  trace_.completed = completed_;
}

void World::integrate(Round r, const std::vector<std::vector<NodeId>>& adj, const std::vector<Message>& msgs) {
  switch (cfg_.algorithm) {
    case Algorithm::Alg1: integrate_alg1(r, adj, msgs); break;
    case Algorithm::Alg2: integrate_alg2(r, adj, msgs); break;
    case Algorithm::NoRep: integrate_norep(r, adj); break;
  }
}

void World::integrate_alg1(Round r, const std::vector<std::vector<NodeId>>& adj, const std::vector<Message>& msgs) {
  const auto n = cfg_.n;
  const auto clock = Alg1Clock::at(r, n);
  for (NodeId v = 0; v < n; ++v) {
    if (terminate_[v]) continue;
    alg1_[v] = alg1_integrate(std::move(alg1_[v]), gather(adj[v], msgs), r);
  }
  if (!clock.is_phase_end(n)) return;

  if (clock.phase == Alg1Phase::Search) {
    for (NodeId v = 0; v < n; ++v) {
      if (terminate_[v]) continue;
      auto [next, enqueue] = alg1_end_search(std::move(alg1_[v]), cfg_.policy);
      alg1_[v] = std::move(next);
      if (!enqueue) continue;
      Event e;
      e.round = r;
      e.kind = EventKind::Enqueue;
      e.node = v;
      e.request = enqueue->request;
      emit(std::move(e));
      active_.erase(enqueue->request);
      ++enqueued_;
    }
    return;
  }

  for (NodeId v = 0; v < n; ++v) {
    if (terminate_[v]) continue;
    if (!alg1_[v].cancels.empty()) {
      Event e;
      e.round = r;
      e.kind = EventKind::Cancel;
      e.node = v;
      e.message = Message::cancel(*alg1_[v].cancels.begin());
      emit(std::move(e));
    }
    alg1_[v] = alg1_end_cancel(std::move(alg1_[v]));
  }
}

void World::integrate_alg2(Round r, const std::vector<std::vector<NodeId>>& adj, const std::vector<Message>& msgs) {
  const auto n = cfg_.n;
  const auto T = cfg_.T;
  const auto clock = Alg2Clock::at(r, n, T);
  for (NodeId v = 0; v < n; ++v) alg2_[v] = alg2_integrate(std::move(alg2_[v]), gather(adj[v], msgs));
  if (!clock.is_period_end(T)) return;
  for (NodeId v = 0; v < n; ++v) alg2_[v] = alg2_end_period(std::move(alg2_[v]));
  if (!clock.is_cycle_end(n, T)) return;

  // Requests injected after the cycle start carry a later init_round, so
  // the gamma smallest active requests are the ones counted in beta.
  std::vector<QueueRequest> prefix(active_.begin(), std::next(active_.begin(), gamma_));
  std::vector<EnqueueEvent> events;
  for (NodeId v = 0; v < n; ++v) {
    if (gamma_ > 0) {
      const auto& known = alg2_[v].known;
      const auto take = std::min<std::size_t>(gamma_, known.size());
      if (!std::equal(prefix.begin(), prefix.end(), known.begin(), std::next(known.begin(), take)) ||
          take != prefix.size()) {
        ++prefix_violations_;
      }
    }
    auto [next, made] = alg2_end_cycle(std::move(alg2_[v]), gamma_);
    alg2_[v] = std::move(next);
    events.insert(events.end(), made.begin(), made.end());
  }
  std::stable_sort(events.begin(), events.end(), [](const auto& a, const auto& b) { return a.request < b.request; });
  for (const auto& ev : events) {
    Event e;
    e.round = r;
    e.kind = EventKind::Enqueue;
    e.node = ev.predecessor;
    e.request = ev.request;
    emit(std::move(e));
    active_.erase(ev.request);
    ++enqueued_;
  }
}

void World::integrate_norep(Round r, const std::vector<std::vector<NodeId>>& adj) {
  const auto n = cfg_.n;
  std::vector<std::optional<Handoff>> incoming(n);
  for (NodeId v = 0; v < n; ++v) {
    const auto held = norep_[v].holds_message;
    auto step = norep_step(std::move(norep_[v]), std::nullopt, adj[v]);
    norep_[v] = std::move(step.state);
    if (step.pass_to && held) incoming[*step.pass_to] = Handoff{*held, v};
  }
  for (NodeId v = 0; v < n; ++v) {
    if (!incoming[v]) continue;
    auto step = norep_step(std::move(norep_[v]), incoming[v], {});
    norep_[v] = std::move(step.state);
    if (!step.enqueue) continue;
    Event e;
    e.round = r;
    e.kind = EventKind::Enqueue;
    e.node = v;
    e.request = step.enqueue->request;
    emit(std::move(e));
    // the issuer learns it is the new tail without a message of its own
    norep_[step.enqueue->request.origin].succ = SuccValue::bottom();
    active_.erase(step.enqueue->request);
    ++enqueued_;
  }
}

void World::record_succ_changes(Round r) {
  for (NodeId v = 0; v < cfg_.n; ++v) {
    SuccValue now = succ_[v];
    switch (cfg_.algorithm) {
      case Algorithm::Alg1: now = alg1_[v].succ; break;
      case Algorithm::Alg2: now = alg2_[v].succ; break;
      case Algorithm::NoRep: now = norep_[v].succ; break;
    }
    if (now == succ_[v]) continue;
    Event e;
    e.round = r;
    e.kind = EventKind::SuccChange;
    e.node = v;
    e.before = succ_[v];
    e.after = now;
    emit(std::move(e));
    if (succ_[v].is_infinity()) schedule_.on_completed(v, r);
    succ_[v] = now;
  }
}

void World::idle_detect(Round, const std::vector<std::vector<NodeId>>& adj, const std::vector<Message>& msgs) {
  const auto n = cfg_.n;
  std::vector<bool> joins(n, false);
  for (NodeId v = 0; v < n; ++v) {
    if (terminate_[v]) continue;
    bool heard_queue = false;
    bool heard_terminate = false;
    for (auto w : adj[v]) {
      heard_queue = heard_queue || msgs[w].is_queue();
      heard_terminate = heard_terminate || msgs[w].is_terminate();
    }
    if (heard_queue || !alg1_[v].requests.empty()) {
      quiet_[v] = 0;
    } else {
      ++quiet_[v];
    }
    joins[v] = heard_terminate || (alg1_[v].succ.is_bottom() && quiet_[v] >= Round{2} * n);
  }
  for (NodeId v = 0; v < n; ++v) {
    if (!joins[v]) continue;
    terminate_[v] = true;
    Event e;
    e.round = round_;
    e.kind = EventKind::Terminate;
    e.node = v;
    e.message = Message::terminate();
    emit(std::move(e));
  }
  completed_ = std::all_of(terminate_.begin(), terminate_.end(), [](bool b) { return b; });
}

void World::check_oracle_stop() {
  if (!schedule_.fully_released() || enqueued_ < schedule_.total()) return;
  completed_ = std::any_of(succ_.begin(), succ_.end(), [](const auto& s) { return s.is_bottom(); });
}

// --- runs ------------------------------------------------------------------

RunResult run(const ScenarioConfig& cfg) {
  World world(cfg);
  while (!world.done()) world.step_round();
  RunResult result;
  result.schedule = world.schedule();
  result.horizon_exceeded = !world.completed();
  const auto violations = world.prefix_violations();
  result.trace = world.take_trace();
  result.metrics = compute_metrics(result.trace);
  result.metrics.prefix_violations = violations;
  return result;
}

Report verify_run(const ScenarioConfig& cfg, const RunResult& result) {
  VerifyOptions options;
  options.schedule = cfg.schedule;
  std::vector<ScheduleEntry> scheduled = result.schedule.released();
  for (std::size_t i = scheduled.size(); i < result.schedule.total(); ++i) {
    scheduled.push_back({0, result.schedule.issuers()[i]});
  }
  options.scheduled = std::move(scheduled);
  Report report = verify_trace(result.trace, options);
  if (cfg.algorithm == Algorithm::Alg2) {
    const auto v = result.metrics.prefix_violations;
    report.add("prefix_agreement", v == 0 ? CheckStatus::Pass : CheckStatus::Fail, "violations=" + std::to_string(v));
  }
  return report;
}

}  // namespace dynq
