#include <fstream>
#include <sstream>

#include "doctest.h"
#include "dynq/engine.hpp"

using namespace dynq;

namespace {

ScenarioConfig alg1(std::uint32_t n, std::uint32_t k, ScheduleKind schedule = ScheduleKind::concurrent()) {
  ScenarioConfig cfg;
  cfg.n = n;
  cfg.k = k;
  cfg.schedule = schedule;
  return cfg;
}

std::vector<Event> of_kind(const Trace& t, EventKind kind) {
  std::vector<Event> out;
  for (const auto& e : t.events) {
    if (e.kind == kind) out.push_back(e);
  }
  return out;
}

}  // namespace

TEST_SUITE("engine") {
  TEST_CASE("n=2 hand trace") {
    auto r = run(alg1(2, 1));
    const auto& t = r.trace;
    CHECK(t.rounds_executed == 4);
    CHECK(t.completed);
    auto enq = of_kind(t, EventKind::Enqueue);
    REQUIRE(enq.size() == 1);
    CHECK(enq[0].round == 1);
    CHECK(enq[0].node == 0);
    CHECK(enq[0].request == QueueRequest{0, 1});
    auto sc = of_kind(t, EventKind::SuccChange);
    REQUIRE(sc.size() == 2);
    CHECK(sc[1].round == 3);
    CHECK(sc[1].node == 1);
    CHECK(sc[1].after == SuccValue::bottom());

    std::ifstream in(std::string(DYNQ_TEST_DATA) + "/golden_n2_alg1.trace");
    std::stringstream golden;
    golden << in.rdbuf();
    CHECK(format_trace(t) == golden.str());
  }

  TEST_CASE("completion rounds for Alg1") {
    CHECK(run(alg1(4, 1, ScheduleKind::sequential())).metrics.rounds_total == 8);
    for (auto adv : {AdversaryKind::static_complete(), AdversaryKind::oblivious_random(0),
                     AdversaryKind::adaptive_line(), AdversaryKind::t_stable(3, 0)}) {
      auto cfg = alg1(4, 3);
      cfg.adversary = adv;
      for (std::uint64_t seed = 0; seed < 5; ++seed) {
        cfg.seed = seed;
        auto r = run(cfg);
        CHECK(r.trace.completed);
        CHECK(r.metrics.rounds_total == 24);
      }
    }
  }

  TEST_CASE("k=0 completes immediately") {
    auto r = run(alg1(5, 0));
    CHECK(r.trace.completed);
    CHECK(r.metrics.rounds_total == 0);
    CHECK(r.trace.events.empty());
    auto q = extract_queue(final_succ(r.trace), 0);
    CHECK(q.nodes == std::vector<NodeId>{0});
  }

  TEST_CASE("idle rounds only send EMPTY") {
    auto cfg = alg1(4, 1, ScheduleKind::dynamic(1000));
    World w(cfg);
    const auto first = w.schedule().released().front().init_round;
    REQUIRE(first > 3);
    for (int i = 0; i < 3; ++i) w.step_round();
    CHECK(w.round() == 3);
    for (const auto& e : w.trace().events) {
      if (e.kind == EventKind::Send) CHECK(e.message.is_empty());
      CHECK(e.kind != EventKind::Recv);
    }
  }

  TEST_CASE("NoRep under Trap never enqueues") {
    for (std::uint32_t n : {3u, 4u, 6u}) {
      ScenarioConfig cfg;
      cfg.n = n;
      cfg.k = 1;
      cfg.algorithm = Algorithm::NoRep;
      cfg.adversary = AdversaryKind::trap();
      auto r = run(cfg);
      CHECK(r.horizon_exceeded);
      CHECK(r.metrics.rounds_total == 10 * n * n);
      CHECK(r.metrics.enqueue_count == 0);
      CHECK(r.metrics.visited.size() == 2);
    }
  }

  TEST_CASE("NoRep on a static graph reaches the tail") {
    ScenarioConfig cfg;
    cfg.n = 5;
    cfg.k = 1;
    cfg.algorithm = Algorithm::NoRep;
    auto r = run(cfg);
    CHECK(r.trace.completed);
    CHECK(r.metrics.enqueue_count == 1);
    CHECK(verify_run(cfg, r).passed());
  }

  TEST_CASE("sequential requests start the round after the previous one is served") {
    auto r = run(alg1(5, 3, ScheduleKind::sequential()));
    auto inits = of_kind(r.trace, EventKind::RequestInit);
    REQUIRE(inits.size() == 3);
    CHECK(inits[0].round == 0);
    CHECK(inits[1].round == 10);
    CHECK(inits[2].round == 20);
    CHECK(r.metrics.rounds_total == 30);
  }

  TEST_CASE("phase boundaries") {
    auto cfg = alg1(5, 4);
    cfg.adversary = AdversaryKind::oblivious_random(0);
    cfg.seed = 3;
    auto r = run(cfg);
    for (const auto& e : of_kind(r.trace, EventKind::Enqueue)) CHECK(e.round % 10 == 4);
    for (const auto& e : of_kind(r.trace, EventKind::Cancel)) CHECK(e.round % 10 == 9);
  }

  TEST_CASE("Alg2 boundaries and default window") {
    ScenarioConfig cfg;
    cfg.n = 8;
    cfg.k = 7;
    cfg.algorithm = Algorithm::Alg2;
    cfg.T = 3;
    cfg.adversary = AdversaryKind::t_stable(0, 0);
    CHECK(cfg.effective_adversary().T == 6);
    auto r = run(cfg);
    CHECK(r.trace.completed);
    for (const auto& e : of_kind(r.trace, EventKind::Enqueue)) CHECK(e.round % 18 == 17);
    CHECK(r.metrics.rounds_total == 3 * 18);
    CHECK(r.metrics.prefix_violations == 0);

    auto alg1_cfg = alg1(6, 2);
    alg1_cfg.T = 3;
    alg1_cfg.adversary = AdversaryKind::t_stable(0, 0);
    CHECK(alg1_cfg.effective_adversary().T == 3);
  }

  TEST_CASE("adaptive adversaries see the pending messages before delivery") {
    auto cfg = alg1(6, 2);
    cfg.adversary = AdversaryKind::adaptive_line();
    auto t = run(cfg).trace;
    CHECK(check_round_structure(t).status == CheckStatus::Pass);
  }

  TEST_CASE("IdleDetect") {
    auto cfg = alg1(3, 1);
    cfg.termination = Termination::IdleDetect;
    auto r = run(cfg);
    CHECK(r.trace.completed);
    auto term = of_kind(r.trace, EventKind::Terminate);
    REQUIRE(term.size() == 3);
    auto sc = of_kind(r.trace, EventKind::SuccChange);
    const auto served = sc.back().round;
    CHECK(served == 5);
    // the new tail's quiet count starts the round it becomes the tail
    CHECK(term.front().round == served + 2 * cfg.n - 1);
    CHECK(term.front().node == sc.back().node);
    CHECK(term.back().round <= term.front().round + cfg.n);
    CHECK(r.metrics.rounds_total == term.back().round + 1);
  }

  TEST_CASE("IdleDetect waits for active requests") {
    auto cfg = alg1(6, 5);
    cfg.termination = Termination::IdleDetect;
    cfg.adversary = AdversaryKind::oblivious_random(0);
    cfg.seed = 8;
    auto r = run(cfg);
    CHECK(r.trace.completed);
    CHECK(r.metrics.enqueue_count == 5);
    auto term = of_kind(r.trace, EventKind::Terminate);
    auto enq = of_kind(r.trace, EventKind::Enqueue);
    CHECK(term.front().round > enq.back().round + 2 * cfg.n);
    CHECK(term.back().round - term.front().round <= cfg.n);
  }

  TEST_CASE("halted nodes ignore further TERMINATE") {
    auto cfg = alg1(4, 0);
    cfg.termination = Termination::IdleDetect;
    World w(cfg);
    while (!w.done()) w.step_round();
    CHECK(w.completed());
    for (NodeId v = 0; v < 4; ++v) CHECK(w.halted(v));
    CHECK(of_kind(w.trace(), EventKind::Terminate).size() == 4);
  }

  TEST_CASE("config validation") {
    auto bad = [](auto mutate, const char* key) {
      ScenarioConfig cfg;
      mutate(cfg);
      try {
        cfg.validate();
        FAIL("expected ConfigError for " << key);
      } catch (const ConfigError& e) {
        CHECK(e.key() == key);
      }
    };
    bad([](ScenarioConfig& c) { c.n = 0; }, "n");
    bad([](ScenarioConfig& c) { c.k = 4; }, "k");
    bad([](ScenarioConfig& c) { c.head = 4; }, "head");
    bad([](ScenarioConfig& c) { c.T = 0; }, "T");
    bad([](ScenarioConfig& c) { c.algorithm = Algorithm::Alg2; c.termination = Termination::IdleDetect; },
        "termination");
    bad([](ScenarioConfig& c) { c.algorithm = Algorithm::NoRep; c.k = 2; }, "k");
    bad([](ScenarioConfig& c) { c.edge_prob = 1.5; }, "edge_prob");
    CHECK_THROWS_AS(World(ScenarioConfig{.n = 3, .k = 3}), ConfigError);
  }

  TEST_CASE("default horizons") {
    auto a = alg1(8, 4);
    CHECK(a.effective_horizon() == 320);
    a.horizon = 12;
    CHECK(a.effective_horizon() == 12);
    ScenarioConfig nr;
    nr.n = 5;
    nr.algorithm = Algorithm::NoRep;
    CHECK(nr.effective_horizon() == 250);
    ScenarioConfig a2;
    a2.n = 4;
    a2.k = 1;
    a2.algorithm = Algorithm::Alg2;
    a2.T = 64;
    CHECK(a2.effective_horizon() == 256);
  }

  TEST_CASE("horizon truncation") {
    auto cfg = alg1(5, 2);
    cfg.horizon = 7;
    auto r = run(cfg);
    CHECK(r.horizon_exceeded);
    CHECK(r.trace.rounds_executed == 7);
    CHECK_FALSE(r.trace.completed);
  }

  TEST_CASE("determinism") {
    auto cfg = alg1(9, 5, ScheduleKind::dynamic(30));
    cfg.adversary = AdversaryKind::oblivious_random(0, 0.1);
    cfg.policy = EnqueuePolicy::FirstArrival;
    cfg.seed = 1234;
    CHECK(format_trace(run(cfg).trace) == format_trace(run(cfg).trace));
    auto other = cfg;
    other.seed = 1235;
    CHECK(format_trace(run(cfg).trace) != format_trace(run(other).trace));
  }
}
