#include "dynq/trace.hpp"

#include <array>
#include <sstream>

#include "text_util.hpp"

namespace dynq {

namespace {

constexpr std::array<const char*, 8> kEventNames{"RequestInit", "Send",       "Graph",    "Recv",
                                                 "Enqueue",     "Cancel", "SuccChange", "Terminate"};

std::string_view field(std::string_view token, std::string_view key) {
  if (!token.starts_with(key) || token.size() <= key.size() || token[key.size()] != '=') {
    throw ParseError("expected " + std::string(key) + "=..., got '" + std::string(token) + "'");
  }
  return token.substr(key.size() + 1);
}

}  // namespace

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Alg1: return "Alg1";
    case Algorithm::Alg2: return "Alg2";
    case Algorithm::NoRep: return "NoRep";
  }
  return "?";
}

Algorithm parse_algorithm(std::string_view text) {
  text = detail::trim(text);
  if (text == "Alg1") return Algorithm::Alg1;
  if (text == "Alg2") return Algorithm::Alg2;
  if (text == "NoRep") return Algorithm::NoRep;
  throw ParseError("unknown algorithm '" + std::string(text) + "'");
}

const char* to_string(EventKind k) { return kEventNames[static_cast<std::size_t>(k)]; }

EventKind parse_event_kind(std::string_view text) {
  for (std::size_t i = 0; i < kEventNames.size(); ++i) {
    if (text == kEventNames[i]) return static_cast<EventKind>(i);
  }
  throw ParseError("unknown event kind '" + std::string(text) + "'");
}

std::string payload_text(const Event& e) {
  switch (e.kind) {
    case EventKind::RequestInit:
    case EventKind::Enqueue: return to_string(e.request);
    case EventKind::Send:
    case EventKind::Cancel:
    case EventKind::Terminate: return to_string(e.message);
    case EventKind::Recv: return std::to_string(e.from) + ":" + to_string(e.message);
    case EventKind::SuccChange: return to_string(e.before) + "->" + to_string(e.after);
    case EventKind::Graph: return format_edges(e.edges);
  }
  return "";
}

Round Trace::cycle_length() const {
  switch (header.algorithm) {
    case Algorithm::Alg1: return Round{2} * header.n;
    case Algorithm::Alg2: return Alg2Clock::cycle_length(header.n, header.T);
    case Algorithm::NoRep: return 0;
  }
  return 0;
}

GraphTrace Trace::graph_history() const {
  GraphTrace g{header.n, {}};
  for (const auto& e : events) {
    if (e.kind == EventKind::Graph) g.rounds.push_back(RoundGraph{header.n, e.round, e.edges});
  }
  return g;
}

std::string format_trace(const Trace& trace) {
  const auto& h = trace.header;
  std::ostringstream os;
  os << "# dynq-trace n=" << h.n << " algorithm=" << to_string(h.algorithm) << " T=" << h.T
     << " head=" << h.head << " policy=" << to_string(h.policy) << " horizon=" << h.horizon << "\n";
  for (const auto& e : trace.events) {
    os << "round=" << e.round << " kind=" << to_string(e.kind) << " node=";
    if (e.kind == EventKind::Graph) {
      os << "*";
    } else {
      os << e.node;
    }
    os << " payload=" << payload_text(e) << "\n";
  }
  os << "# end rounds=" << trace.rounds_executed << " completed=" << (trace.completed ? 1 : 0) << "\n";
  return os.str();
}

Trace parse_trace(std::string_view text) {
  Trace trace;
  std::istringstream in{std::string(text)};
  std::string line;
  bool saw_header = false;
  bool saw_footer = false;
  while (std::getline(in, line)) {
    auto sv = detail::trim(line);
    if (sv.empty()) continue;
    auto tokens = detail::split(sv, ' ');
    if (sv.starts_with("# dynq-trace")) {
      if (tokens.size() != 8) throw ParseError("bad trace header: " + line);
      auto& h = trace.header;
      h.n = detail::parse_uint<std::uint32_t>(field(tokens[2], "n"));
      h.algorithm = parse_algorithm(field(tokens[3], "algorithm"));
      h.T = detail::parse_uint<std::uint32_t>(field(tokens[4], "T"));
      h.head = detail::parse_uint<NodeId>(field(tokens[5], "head"));
      auto policy = field(tokens[6], "policy");
      if (policy == "FirstArrival") {
        h.policy = EnqueuePolicy::FirstArrival;
      } else if (policy == "LexSmallest") {
        h.policy = EnqueuePolicy::LexSmallest;
      } else {
        throw ParseError("unknown policy '" + std::string(policy) + "'");
      }
      h.horizon = detail::parse_uint<Round>(field(tokens[7], "horizon"));
      saw_header = true;
      continue;
    }
    if (sv.starts_with("# end")) {
      if (tokens.size() != 4) throw ParseError("bad trace footer: " + line);
      trace.rounds_executed = detail::parse_uint<Round>(field(tokens[2], "rounds"));
      trace.completed = field(tokens[3], "completed") == "1";
      saw_footer = true;
      continue;
    }
    if (sv.starts_with("#")) continue;
    if (!saw_header) throw ParseError("event before trace header");
    if (tokens.size() != 4) throw ParseError("bad event line: " + line);

    Event e;
    e.round = detail::parse_uint<Round>(field(tokens[0], "round"));
    e.kind = parse_event_kind(field(tokens[1], "kind"));
    auto node = field(tokens[2], "node");
    if (e.kind != EventKind::Graph) e.node = detail::parse_uint<NodeId>(node);
    auto payload = field(tokens[3], "payload");
    switch (e.kind) {
      case EventKind::RequestInit:
      case EventKind::Enqueue: e.request = parse_request(payload); break;
      case EventKind::Send:
      case EventKind::Cancel:
      case EventKind::Terminate: e.message = parse_message(payload); break;
      case EventKind::Recv: {
        auto colon = payload.find(':');
        if (colon == std::string_view::npos) throw ParseError("bad Recv payload: " + line);
        e.from = detail::parse_uint<NodeId>(payload.substr(0, colon));
        e.message = parse_message(payload.substr(colon + 1));
        break;
      }
      case EventKind::SuccChange: {
        auto arrow = payload.find("->");
        if (arrow == std::string_view::npos) throw ParseError("bad SuccChange payload: " + line);
        e.before = parse_succ(payload.substr(0, arrow));
        e.after = parse_succ(payload.substr(arrow + 2));
        break;
      }
      case EventKind::Graph: e.edges = parse_edges(payload); break;
    }
    trace.events.push_back(std::move(e));
  }
  if (!saw_header) throw ParseError("missing trace header");
  if (!saw_footer) throw ParseError("missing trace footer");
  return trace;
}

}  // namespace dynq
