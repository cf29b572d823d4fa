#include "dynq/workload.hpp"

#include <algorithm>
#include <random>

#include "text_util.hpp"

namespace dynq {

std::string to_string(const ScheduleKind& kind) {
  switch (kind.type) {
    case ScheduleType::Sequential: return "Sequential";
    case ScheduleType::Concurrent: return "Concurrent";
    case ScheduleType::Dynamic: return "Dynamic(" + std::to_string(kind.window) + ")";
    case ScheduleType::Continuous: return "Continuous(" + std::to_string(kind.rate) + ")";
  }
  return "?";
}

ScheduleKind parse_schedule(std::string_view text) {
  text = detail::trim(text);
  if (text == "Sequential") return ScheduleKind::sequential();
  if (text == "Concurrent") return ScheduleKind::concurrent();
  auto arg = [&](std::size_t prefix) { return text.substr(prefix, text.size() - prefix - 1); };
  if (text.starts_with("Dynamic(") && text.ends_with(")")) {
    return ScheduleKind::dynamic(detail::parse_uint<Round>(arg(8)));
  }
  if (text.starts_with("Continuous(") && text.ends_with(")")) {
    auto rate = detail::parse_uint<std::uint32_t>(arg(11));
    if (rate == 0) throw ParseError("Continuous rate must be positive");
    return ScheduleKind::continuous(rate);
  }
  throw ParseError("unknown schedule '" + std::string(text) + "'");
}

Schedule::Schedule(ScheduleKind kind, std::vector<NodeId> issuers, std::vector<ScheduleEntry> released)
    : kind_(kind), issuers_(std::move(issuers)), released_(std::move(released)) {}

std::vector<ScheduleEntry> Schedule::due_at(Round round) const {
  std::vector<ScheduleEntry> out;
  for (const auto& e : released_) {
    if (e.init_round == round) out.push_back(e);
  }
  return out;
}

void Schedule::on_completed(NodeId issuer, Round round) {
  if (kind_.type != ScheduleType::Sequential || fully_released()) return;
  if (released_.empty() || released_.back().issuer != issuer) return;
  released_.push_back({round + 1, issuers_[released_.size()]});
}

Schedule make_schedule(const ScheduleKind& kind, std::uint32_t n, std::uint32_t k, std::uint64_t seed,
                       NodeId head, Round cycle_length) {
  if (n == 0 || k > n - 1) {
    throw TooManyRequests("k=" + std::to_string(k) + " requests need at least k+1 nodes (n=" +
                          std::to_string(n) + ")");
  }
  std::mt19937_64 rng(seed);
  std::vector<NodeId> pool;
  for (NodeId u = 0; u < n; ++u) {
    if (u != head) pool.push_back(u);
  }
  std::shuffle(pool.begin(), pool.end(), rng);
  pool.resize(k);

  std::vector<ScheduleEntry> entries;
  switch (kind.type) {
    case ScheduleType::Sequential:
      if (k > 0) entries.push_back({0, pool.front()});
      break;
    case ScheduleType::Concurrent:
      for (auto u : pool) entries.push_back({0, u});
      break;
    case ScheduleType::Dynamic: {
      std::uniform_int_distribution<Round> when(0, kind.window == 0 ? 0 : kind.window - 1);
      for (auto u : pool) entries.push_back({when(rng), u});
      break;
    }
    case ScheduleType::Continuous:
      for (std::size_t i = 0; i < pool.size(); ++i) {
        entries.push_back({(i / kind.rate) * std::max<Round>(cycle_length, 1), pool[i]});
      }
      break;
  }
  std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return a.init_round != b.init_round ? a.init_round < b.init_round : a.issuer < b.issuer;
  });
  if (kind.type != ScheduleType::Sequential) {
    pool.clear();
    for (const auto& e : entries) pool.push_back(e.issuer);
  }
  return Schedule(kind, std::move(pool), std::move(entries));
}

std::string format_schedule(const std::vector<ScheduleEntry>& entries) {
  std::string out;
  for (const auto& e : entries) {
    out += "init=" + std::to_string(e.init_round) + " node=" + std::to_string(e.issuer) + "\n";
  }
  return out;
}

}  // namespace dynq
