#include "dynq/budget.hpp"

#include <algorithm>
#include <bit>

namespace dynq {

namespace {

constexpr std::size_t kTagBits = 2;

std::size_t fit(std::uint64_t value, std::size_t width) {
  return std::max<std::size_t>(width, static_cast<std::size_t>(std::bit_width(value)));
}

}  // namespace

std::size_t field_width(std::uint32_t n, Round horizon) {
  return static_cast<std::size_t>(std::bit_width(std::max<std::uint64_t>(n, horizon)));
}

std::size_t budget_bits(std::uint32_t n, Round horizon) { return kTagBits + 2 * field_width(n, horizon); }

std::size_t encoded_bits(const Message& m, std::uint32_t n, Round horizon) {
  const auto w = field_width(n, horizon);
  switch (m.kind()) {
    case Message::Kind::Queue: return kTagBits + fit(m.request().init_round, w) + fit(m.request().origin, w);
    case Message::Kind::Cancel: return kTagBits + fit(m.cancel_target(), w);
    case Message::Kind::Empty:
    case Message::Kind::Terminate: return kTagBits;
  }
  return kTagBits;
}

std::optional<BudgetExcess> check_encoded_budget(std::size_t bits, std::uint32_t n, Round horizon) {
  const auto budget = budget_bits(n, horizon);
  if (bits <= budget) return std::nullopt;
  return BudgetExcess{bits, budget};
}

std::optional<BudgetExcess> check_message_budget(const Message& m, std::uint32_t n, Round horizon) {
  return check_encoded_budget(encoded_bits(m, n, horizon), n, horizon);
}

}  // namespace dynq
