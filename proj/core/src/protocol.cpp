#include "dynq/protocol.hpp"

#include <algorithm>

namespace dynq {

const char* to_string(EnqueuePolicy p) {
  return p == EnqueuePolicy::FirstArrival ? "FirstArrival" : "LexSmallest";
}

// --- Algorithm 1 -----------------------------------------------------------

Alg1Clock Alg1Clock::at(Round round, std::uint32_t n) {
  const Round cycle_len = Round{2} * n;
  const Round pos = round % cycle_len;
  Alg1Clock c;
  c.cycle = round / cycle_len;
  c.phase = pos < n ? Alg1Phase::Search : Alg1Phase::Cancel;
  c.round_in_phase = static_cast<std::uint32_t>(pos < n ? pos : pos - n);
  return c;
}

Alg1State alg1_initial(NodeId me, bool is_head) {
  Alg1State s;
  s.me = me;
  s.succ = is_head ? SuccValue::bottom() : SuccValue::infinity();
  return s;
}

Alg1State alg1_inject(Alg1State s, QueueRequest own) {
  s.requests.emplace(own, own.init_round);
  return s;
}

Message alg1_select_broadcast(const Alg1State& s) {
  if (s.clock.phase == Alg1Phase::Search) {
    if (s.requests.empty()) return Message::empty();
    return Message::queue(s.requests.begin()->first);
  }
  if (s.cancels.empty()) return Message::empty();
  return Message::cancel(*s.cancels.begin());
}

Alg1State alg1_integrate(Alg1State s, std::span<const Message> received, Round round) {
  for (const auto& m : received) {
    switch (m.kind()) {
      case Message::Kind::Queue:
        if (s.clock.phase != Alg1Phase::Search) throw PhaseMismatch("QUEUE received during cancel phase");
        s.requests.emplace(m.request(), round);  // keeps the earlier arrival
        break;
      case Message::Kind::Cancel:
        if (s.clock.phase != Alg1Phase::Cancel) throw PhaseMismatch("CANCEL received during search phase");
        s.cancels.insert(m.cancel_target());
        break;
      case Message::Kind::Empty:
      case Message::Kind::Terminate:
        break;
    }
  }
  return s;
}

std::pair<Alg1State, std::optional<EnqueueEvent>> alg1_end_search(Alg1State s, EnqueuePolicy policy) {
  if (!s.succ.is_bottom() || s.requests.empty()) return {std::move(s), std::nullopt};

  auto target = s.requests.begin();
  if (policy == EnqueuePolicy::FirstArrival) {
    // map order is lexicographic, so strict < keeps the smallest among ties
    for (auto it = s.requests.begin(); it != s.requests.end(); ++it) {
      if (it->second < target->second) target = it;
    }
  }
  const QueueRequest chosen = target->first;
  s.succ = SuccValue::node(chosen.origin);
  s.cancels = {chosen.origin};
  EnqueueEvent event{s.me, chosen};
  return {std::move(s), event};
}

Alg1State alg1_end_cancel(Alg1State s) {
  if (s.cancels.empty()) return s;
  if (*s.cancels.begin() == s.me) s.succ = SuccValue::bottom();
  std::erase_if(s.requests, [&](const auto& kv) { return s.cancels.contains(kv.first.origin); });
  s.cancels.clear();
  return s;
}

// --- Algorithm 2 -----------------------------------------------------------

Alg2Clock Alg2Clock::at(Round round, std::uint32_t n, std::uint32_t T) {
  const Round len = cycle_length(n, T);
  const Round pos = round % len;
  Alg2Clock c;
  c.cycle = round / len;
  c.period = static_cast<std::uint32_t>(pos / (Round{2} * T));
  c.round_in_period = static_cast<std::uint32_t>(pos % (Round{2} * T));
  return c;
}

Alg2State alg2_initial(NodeId me, bool is_head) {
  Alg2State s;
  s.me = me;
  s.succ = is_head ? SuccValue::bottom() : SuccValue::infinity();
  return s;
}

Alg2State alg2_inject(Alg2State s, QueueRequest own) {
  s.known.insert(own);
  return s;
}

Message alg2_select_broadcast(const Alg2State& s) {
  for (const auto& q : s.known) {
    if (!s.broadcast.contains(q)) return Message::queue(q);
  }
  return Message::empty();
}

Alg2State alg2_record_broadcast(Alg2State s, const Message& sent) {
  if (sent.is_queue()) s.broadcast.insert(sent.request());
  return s;
}

Alg2State alg2_integrate(Alg2State s, std::span<const Message> received) {
  for (const auto& m : received) {
    if (m.is_queue()) s.known.insert(m.request());
  }
  return s;
}

Alg2State alg2_end_period(Alg2State s) {
  s.broadcast.clear();
  return s;
}

std::pair<Alg2State, std::vector<EnqueueEvent>> alg2_end_cycle(Alg2State s, std::uint32_t gamma) {
  std::vector<EnqueueEvent> events;
  const std::size_t g = std::min<std::size_t>(gamma, s.known.size());
  if (g == 0) return {std::move(s), std::move(events)};

  std::vector<QueueRequest> prefix(s.known.begin(), std::next(s.known.begin(), static_cast<std::ptrdiff_t>(g)));
  if (s.succ.is_bottom()) {
    s.succ = SuccValue::node(prefix.front().origin);
    events.push_back({s.me, prefix.front()});
  }
  for (std::size_t j = 0; j + 1 < g; ++j) {
    if (prefix[j].origin == s.me) {
      s.succ = SuccValue::node(prefix[j + 1].origin);
      events.push_back({s.me, prefix[j + 1]});
    }
  }
  if (prefix.back().origin == s.me) s.succ = SuccValue::bottom();
  for (const auto& q : prefix) s.known.erase(q);
  return {std::move(s), std::move(events)};
}

// --- No-replication baseline -----------------------------------------------

NoRepState norep_initial(NodeId me, bool is_head) {
  NoRepState s;
  s.me = me;
  s.succ = is_head ? SuccValue::bottom() : SuccValue::infinity();
  return s;
}

NoRepState norep_inject(NoRepState s, QueueRequest own) {
  s.holds_message = own;
  s.previous_sender.reset();
  return s;
}

Message norep_select_broadcast(const NoRepState& s) {
  return s.holds_message ? Message::queue(*s.holds_message) : Message::empty();
}

NoRepStep norep_step(NoRepState s, std::optional<Handoff> incoming, std::span<const NodeId> neighbors) {
  NoRepStep out{std::move(s), std::nullopt, std::nullopt};
  auto& st = out.state;

  if (st.holds_message && !neighbors.empty()) {
    std::optional<NodeId> choice;
    for (auto v : neighbors) {
      if (v != st.previous_sender && (!choice || v < *choice)) choice = v;
    }
    if (!choice) choice = *std::min_element(neighbors.begin(), neighbors.end());
    out.pass_to = choice;
    st.holds_message.reset();
    st.previous_sender.reset();
  }

  if (incoming) {
    if (st.succ.is_bottom()) {
      st.succ = SuccValue::node(incoming->request.origin);
      out.enqueue = EnqueueEvent{st.me, incoming->request};
    } else {
      st.holds_message = incoming->request;
      st.previous_sender = incoming->from;
    }
  }
  return out;
}

}  // namespace dynq
