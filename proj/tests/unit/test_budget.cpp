#include "doctest.h"
#include "dynq/budget.hpp"

using namespace dynq;

TEST_SUITE("budget") {
  TEST_CASE("field width covers max(n, horizon)") {
    CHECK(field_width(8, 0) == 4);
    CHECK(field_width(8, 100) == 7);
    CHECK(field_width(1, 1) == 1);
    CHECK(budget_bits(8, 100) == 2 + 2 * 7);
  }

  TEST_CASE("messages within budget") {
    CHECK_FALSE(check_message_budget(Message::empty(), 8, 100));
    CHECK_FALSE(check_message_budget(Message::terminate(), 8, 100));
    CHECK_FALSE(check_message_budget(Message::queue({99, 7}), 8, 100));
    CHECK_FALSE(check_message_budget(Message::cancel(7), 8, 100));
    CHECK(encoded_bits(Message::queue({99, 7}), 8, 100) == budget_bits(8, 100));
  }

  TEST_CASE("two request descriptors do not fit") {
    const auto w = field_width(8, 100);
    auto excess = check_encoded_budget(2 + 4 * w, 8, 100);
    REQUIRE(excess);
    CHECK(excess->bits == 2 + 4 * w);
    CHECK(excess->budget == budget_bits(8, 100));
  }

  TEST_CASE("out-of-range fields overflow") {
    auto excess = check_message_budget(Message::queue({1000000, 7}), 8, 100);
    REQUIRE(excess);
    CHECK(excess->bits > excess->budget);
    BudgetViolation v(3, *excess);
    CHECK(v.node() == 3);
  }
}
