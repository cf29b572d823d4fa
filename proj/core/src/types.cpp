#include "dynq/types.hpp"

#include <charconv>

#include "text_util.hpp"

namespace dynq {

std::string to_string(const QueueRequest& q) {
  return "(" + std::to_string(q.init_round) + "," + std::to_string(q.origin) + ")";
}

QueueRequest parse_request(std::string_view text) {
  if (text.size() < 5 || text.front() != '(' || text.back() != ')') {
    throw ParseError("bad request descriptor: " + std::string(text));
  }
  auto body = text.substr(1, text.size() - 2);
  auto comma = body.find(',');
  if (comma == std::string_view::npos) {
    throw ParseError("bad request descriptor: " + std::string(text));
  }
  return QueueRequest{detail::parse_uint<Round>(body.substr(0, comma)),
                      detail::parse_uint<NodeId>(body.substr(comma + 1))};
}

NodeId SuccValue::target() const {
  if (kind_ != Kind::Node) throw std::logic_error("succ value is not a node");
  return id_;
}

std::string to_string(const SuccValue& s) {
  switch (s.kind()) {
    case SuccValue::Kind::Bottom: return "BOT";
    case SuccValue::Kind::Infinity: return "INF";
    case SuccValue::Kind::Node: return std::to_string(s.target());
  }
  return "?";
}

SuccValue parse_succ(std::string_view text) {
  if (text == "BOT") return SuccValue::bottom();
  if (text == "INF") return SuccValue::infinity();
  return SuccValue::node(detail::parse_uint<NodeId>(text));
}

const QueueRequest& Message::request() const {
  if (kind_ != Kind::Queue) throw std::logic_error("message carries no request");
  return request_;
}

NodeId Message::cancel_target() const {
  if (kind_ != Kind::Cancel) throw std::logic_error("message carries no cancel target");
  return target_;
}

std::string to_string(const Message& m) {
  switch (m.kind()) {
    case Message::Kind::Empty: return "EMPTY";
    case Message::Kind::Terminate: return "TERMINATE";
    case Message::Kind::Queue: return "QUEUE" + to_string(m.request());
    case Message::Kind::Cancel: return "CANCEL(" + std::to_string(m.cancel_target()) + ")";
  }
  return "?";
}

Message parse_message(std::string_view text) {
  if (text == "EMPTY") return Message::empty();
  if (text == "TERMINATE") return Message::terminate();
  if (text.starts_with("QUEUE")) return Message::queue(parse_request(text.substr(5)));
  if (text.starts_with("CANCEL(") && text.ends_with(")")) {
    return Message::cancel(detail::parse_uint<NodeId>(text.substr(7, text.size() - 8)));
  }
  throw ParseError("unknown message: " + std::string(text));
}

}  // namespace dynq
