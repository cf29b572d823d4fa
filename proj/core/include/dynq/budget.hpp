// O(log n) message-size budget: a 2-bit tag plus at most one
// (round, UID) descriptor, each field ceil(log2(max(n, horizon) + 1)) bits.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "dynq/types.hpp"

namespace dynq {

struct BudgetExcess {
  std::size_t bits = 0;
  std::size_t budget = 0;
};

std::size_t field_width(std::uint32_t n, Round horizon);
std::size_t budget_bits(std::uint32_t n, Round horizon);
/// Canonical encoding size of m.
std::size_t encoded_bits(const Message& m, std::uint32_t n, Round horizon);

/// nullopt when `bits` fits the budget.
std::optional<BudgetExcess> check_encoded_budget(std::size_t bits, std::uint32_t n, Round horizon);
std::optional<BudgetExcess> check_message_budget(const Message& m, std::uint32_t n, Round horizon);

class BudgetViolation : public std::runtime_error {
 public:
  BudgetViolation(NodeId node, BudgetExcess excess)
      : std::runtime_error("node " + std::to_string(node) + " sent " + std::to_string(excess.bits) +
                           " bits, budget is " + std::to_string(excess.budget)),
        node_(node),
        excess_(excess) {}

  NodeId node() const { return node_; }
  const BudgetExcess& excess() const { return excess_; }

 private:
  NodeId node_;
  BudgetExcess excess_;
};

}  // namespace dynq
