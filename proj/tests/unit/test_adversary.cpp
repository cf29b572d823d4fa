#include <algorithm>
#include <map>

#include "doctest.h"
#include "dynq/adversary.hpp"

using namespace dynq;

namespace {

struct ViewFixture {
  std::vector<Message> pending;
  std::vector<SuccValue> succ;

  ViewFixture(std::uint32_t n, NodeId tail) : pending(n, Message::empty()), succ(n, SuccValue::infinity()) {
    succ[tail] = SuccValue::bottom();
  }
  NetworkView view() const { return {pending, succ}; }
};

GraphTrace run_oblivious(const AdversaryKind& kind, std::uint32_t n, Round rounds) {
  GraphTrace h{n, {}};
  for (Round r = 0; r < rounds; ++r) h.rounds.push_back(adversary_next_edges(kind, h, std::nullopt, r));
  return h;
}

bool is_simple_path(const RoundGraph& g) {
  if (g.edges.size() + 1 != g.n) return false;
  auto adj = g.adjacency();
  std::size_t ends = 0;
  for (const auto& a : adj) {
    if (a.size() > 2 || a.empty()) return g.n == 1;
    ends += a.size() == 1;
  }
  return ends == 2 && !validate_round_graph(g);
}

}  // namespace

TEST_SUITE("adversary") {
  TEST_CASE("StaticComplete") {
    GraphTrace h{3, {}};
    auto g = adversary_next_edges(AdversaryKind::static_complete(), h, std::nullopt, 0);
    CHECK(g.edges == std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}});
  }

  TEST_CASE("names round trip") {
    for (const char* name : {"StaticComplete", "ObliviousRandom", "TStable", "TStable(4)", "AdaptiveLine", "Trap"}) {
      CHECK(to_string(parse_adversary(name)) == name);
    }
    CHECK_THROWS_AS(parse_adversary("TStable(0)"), ParseError);
    CHECK_THROWS_AS(parse_adversary("Random"), ParseError);
  }

  TEST_CASE("adaptive kinds need the pending messages") {
    GraphTrace h{4, {}};
    CHECK_THROWS_AS(adversary_next_edges(AdversaryKind::trap(), h, std::nullopt, 0), AdaptivityUnavailable);
    CHECK_THROWS_AS(adversary_next_edges(AdversaryKind::adaptive_line(), h, std::nullopt, 0), AdaptivityUnavailable);
  }

  TEST_CASE("Trap isolates the holder with the origin") {
    ViewFixture f(4, 3);
    f.pending[1] = Message::queue({0, 0});
    auto g = adversary_next_edges(AdversaryKind::trap(), GraphTrace{4, {}}, f.view(), 0);
    CHECK_FALSE(validate_round_graph(g));
    CHECK(g.adjacency()[1] == std::vector<NodeId>{0});
  }

  TEST_CASE("Trap at the origin pairs it with a fixed non-tail partner") {
    ViewFixture f(5, 0);
    f.pending[3] = Message::queue({0, 3});
    auto g = adversary_next_edges(AdversaryKind::trap(), GraphTrace{5, {}}, f.view(), 0);
    CHECK_FALSE(validate_round_graph(g));
    CHECK(g.adjacency()[3] == std::vector<NodeId>{1});
  }

  TEST_CASE("Trap falls back to the complete graph without a lone QUEUE") {
    ViewFixture f(4, 0);
    auto g = adversary_next_edges(AdversaryKind::trap(), GraphTrace{4, {}}, f.view(), 0);
    CHECK(g.edges.size() == 6);
    f.pending[1] = Message::queue({0, 1});
    f.pending[2] = Message::queue({0, 1});
    g = adversary_next_edges(AdversaryKind::trap(), GraphTrace{4, {}}, f.view(), 0);
    CHECK(g.edges.size() == 6);
  }

  TEST_CASE("AdaptiveLine puts the smallest holders at one end and the tail at the other") {
    ViewFixture f(6, 2);
    f.pending[4] = Message::queue({0, 4});
    f.pending[5] = Message::queue({0, 4});
    f.pending[1] = Message::queue({0, 5});
    auto g = adversary_next_edges(AdversaryKind::adaptive_line(), GraphTrace{6, {}}, f.view(), 0);
    CHECK(is_simple_path(g));
    // order 4,5,0,1,3,2
    CHECK(g.has_edge(4, 5));
    CHECK(g.has_edge(5, 0));
    CHECK(g.has_edge(3, 2));
    CHECK(g.adjacency()[4].size() == 1);
    CHECK(g.adjacency()[2].size() == 1);
  }

  TEST_CASE("AdaptiveLine during cancel floods towards the cancel target") {
    ViewFixture f(5, 0);
    f.succ[0] = SuccValue::node(3);
    f.pending[0] = Message::cancel(3);
    auto g = adversary_next_edges(AdversaryKind::adaptive_line(), GraphTrace{5, {}}, f.view(), 0);
    CHECK(is_simple_path(g));
    CHECK(g.adjacency()[3].size() == 1);
    CHECK(g.adjacency()[0].size() == 1);
  }

  TEST_CASE("AdaptiveLine always emits a Hamiltonian path") {
    for (std::uint32_t n = 2; n <= 9; ++n) {
      for (NodeId tail = 0; tail < n; ++tail) {
        ViewFixture f(n, tail);
        f.pending[(tail + 1) % n] = Message::queue({1, (tail + 1) % n});
        auto g = adversary_next_edges(AdversaryKind::adaptive_line(), GraphTrace{n, {}}, f.view(), 0);
        CHECK(is_simple_path(g));
      }
    }
  }

  TEST_CASE("random adversaries emit connected graphs deterministically") {
    for (std::uint32_t n : {1u, 2u, 5u, 12u}) {
      for (double p : {0.0, 0.3}) {
        auto kind = AdversaryKind::oblivious_random(42, p);
        auto a = run_oblivious(kind, n, 20);
        auto b = run_oblivious(kind, n, 20);
        CHECK(a == b);
        for (const auto& g : a.rounds) {
          CHECK_FALSE(validate_round_graph(g));
          if (p == 0.0) CHECK(g.edges.size() + 1 == std::max<std::size_t>(n, 1));
        }
      }
    }
    auto c = run_oblivious(AdversaryKind::oblivious_random(1), 8, 10);
    auto d = run_oblivious(AdversaryKind::oblivious_random(2), 8, 10);
    CHECK_FALSE(c == d);
  }

  TEST_CASE("TStable keeps a spanning tree for each aligned window") {
    for (std::uint32_t T : {1u, 2u, 3u, 5u}) {
      auto h = run_oblivious(AdversaryKind::t_stable(T, 9, 0.2), 7, 4 * T + 1);
      CHECK(check_T_interval_aligned(h, T));
      CHECK(check_T_interval(h, 1));
    }
    auto h = run_oblivious(AdversaryKind::t_stable(3, 11), 6, 3);
    CHECK(h.rounds[0] == RoundGraph{6, 0, h.rounds[0].edges});
    CHECK(h.rounds[0].edges == h.rounds[2].edges);
    CHECK(check_T_interval(h, 3));
  }

  TEST_CASE("spanning trees are spread over labelled trees") {
    // n=3 has three labelled trees; a uniform sampler hits each about 1/3 of the time
    std::map<std::vector<Edge>, int> seen;
    for (std::uint64_t i = 0; i < 3000; ++i) seen[RoundGraph::from_edges(3, 0, random_connected_edges(3, 5, i, i, 0.0)).edges]++;
    CHECK(seen.size() == 3);
    for (const auto& [edges, count] : seen) {
      CHECK(count > 850);
      CHECK(count < 1150);
    }
  }
}
