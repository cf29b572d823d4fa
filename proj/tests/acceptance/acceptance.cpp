// Acceptance run: one "CRITERION <i> PASS|FAIL <detail>" line per criterion.
// Exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dynq/engine.hpp"
#include "dynq/sweep.hpp"
#include "dynq/trace.hpp"
#include "dynq/verify.hpp"

using namespace dynq;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("CRITERION %d %s %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

struct SuiteRun {
  ScenarioConfig cfg;
  RunResult result;
};

std::string describe(const ScenarioConfig& cfg) {
  std::ostringstream os;
  os << to_string(cfg.algorithm) << " " << to_string(cfg.effective_adversary()) << " " << to_string(cfg.schedule)
     << " " << to_string(cfg.policy) << " n=" << cfg.n << " k=" << cfg.k << " T=" << cfg.T << " seed=" << cfg.seed;
  return os.str();
}

std::vector<ScenarioConfig> suite_configs(std::size_t count) {
  std::mt19937_64 rng(2024);
  std::vector<ScenarioConfig> out;
  const ScheduleKind schedules[] = {ScheduleKind::sequential(), ScheduleKind::concurrent(),
                                    ScheduleKind::dynamic(40)};
  for (std::size_t i = 0; i < count; ++i) {
    ScenarioConfig cfg;
    cfg.algorithm = i % 2 ? Algorithm::Alg2 : Algorithm::Alg1;
    cfg.n = 2 + static_cast<std::uint32_t>(rng() % 15);
    cfg.k = 1 + static_cast<std::uint32_t>(rng() % (cfg.n - 1));
    cfg.schedule = schedules[(i / 2) % 3];
    cfg.policy = (i / 6) % 2 ? EnqueuePolicy::FirstArrival : EnqueuePolicy::LexSmallest;
    cfg.seed = rng();
    if (cfg.algorithm == Algorithm::Alg1) {
      switch ((i / 12) % 3) {
        case 0: cfg.adversary = AdversaryKind::static_complete(); break;
        case 1: cfg.adversary = AdversaryKind::oblivious_random(0, 0.1); break;
        default: cfg.adversary = AdversaryKind::adaptive_line(); break;
      }
    } else {
      cfg.T = 1 + static_cast<std::uint32_t>(rng() % 4);
      cfg.adversary = (i / 12) % 3 == 0 ? AdversaryKind::static_complete() : AdversaryKind::t_stable(0, 0);
    }
    out.push_back(cfg);
  }
  return out;
}

// 1. Exactly-once and a well-formed chain on every suite scenario.
void criterion_correctness(const std::vector<SuiteRun>& suite, double seconds) {
  std::size_t bad = 0;
  std::string first;
  for (const auto& s : suite) {
    auto once = check_exactly_once(s.result.trace, s.result.schedule.released());
    bool ok = once.passed() && once.checks.size() == 3 && s.result.metrics.completed;
    try {
      auto q = extract_queue(final_succ(s.result.trace), s.cfg.head);
      ok = ok && q.nodes.size() == s.cfg.k + 1;
    } catch (const QueueError&) {
      ok = false;
    }
    if (!ok && bad++ == 0) first = describe(s.cfg);
  }
  std::ostringstream os;
  os << "scenarios=" << suite.size() << " failed=" << bad << " seconds=" << seconds;
  if (bad) os << " first=[" << first << "]";
  report(1, bad == 0 && suite.size() >= 200 && seconds < 10.0, os.str());
}

// 2. Alg1 completes in exactly 2nk rounds.
void criterion_alg1_complexity() {
  std::size_t runs = 0, bad = 0;
  std::string first;
  for (auto schedule : {ScheduleKind::sequential(), ScheduleKind::concurrent()}) {
    for (auto adversary :
         {AdversaryKind::static_complete(), AdversaryKind::oblivious_random(0), AdversaryKind::adaptive_line()}) {
      for (std::uint32_t n : {2u, 3u, 5u, 8u, 13u}) {
        for (std::uint32_t k = 1; k < n; k += std::max(1u, n / 4)) {
          ScenarioConfig cfg;
          cfg.n = n;
          cfg.k = k;
          cfg.schedule = schedule;
          cfg.adversary = adversary;
          cfg.seed = runs;
          const auto r = run(cfg);
          ++runs;
          const bool ok = r.metrics.completed && r.metrics.rounds_total == Round{2} * n * k;
          if (!ok && bad++ == 0) first = describe(cfg) + " rounds=" + std::to_string(r.metrics.rounds_total);
        }
      }
    }
  }
  report(2, bad == 0, "runs=" + std::to_string(runs) + " mismatches=" + std::to_string(bad) +
                          (bad ? " first=[" + first + "]" : ""));
}

// 3. Alg2 cycles and rounds against the closed form.
void criterion_alg2_scaling() {
  bool ok = true;
  std::ostringstream os;
  for (auto [n, k] : {std::pair<std::uint32_t, std::uint32_t>{8, 7}, {9, 8}}) {
    os << "n=" << n << ",k=" << k << ":";
    for (std::uint32_t T : {1u, 2u, 4u, 8u}) {
      ScenarioConfig cfg;
      cfg.algorithm = Algorithm::Alg2;
      cfg.n = n;
      cfg.k = k;
      cfg.T = T;
      cfg.adversary = AdversaryKind::t_stable(0, 0);
      cfg.seed = T;
      const auto r = run(cfg);
      const std::uint64_t gamma = std::min(k, T);
      const std::uint64_t cycles = (k + gamma - 1) / gamma;
      const Round L = Round{2} * ((n + T - 1) / T) * T;
      const bool match = r.metrics.completed && r.metrics.cycles_used == cycles && r.metrics.rounds_total == cycles * L;
      ok = ok && match;
      os << " T" << T << "=" << r.metrics.cycles_used << "/" << r.metrics.rounds_total << (match ? "" : "(want " + std::to_string(cycles) + "/" + std::to_string(cycles * L) + ")");
    }
    os << " ";
  }
  report(3, ok, os.str() + "k=n rejected: at most n-1 non-head issuers");
}

// 4. Alg1 tailless spans are exactly n when an enqueue happens, never more.
void criterion_taillessness(const std::vector<SuiteRun>& suite) {
  std::size_t spans = 0, bad = 0;
  std::string first;
  for (const auto& s : suite) {
    if (s.cfg.algorithm != Algorithm::Alg1) continue;
    for (const auto& span : tailless_spans(s.result.trace)) {
      ++spans;
      const bool ok = span.truncated ? span.length <= s.cfg.n : span.length == s.cfg.n;
      if (!ok && bad++ == 0) first = describe(s.cfg) + " length=" + std::to_string(span.length);
    }
    if (s.result.metrics.max_tailless_span > s.cfg.n && bad++ == 0) first = describe(s.cfg);
  }
  report(4, bad == 0 && spans > 0,
         "spans=" + std::to_string(spans) + " bad=" + std::to_string(bad) + (bad ? " first=[" + first + "]" : ""));
}

// 5. Dissemination in every cycle of every suite run.
void criterion_dissemination(const std::vector<SuiteRun>& suite) {
  std::size_t cycles = 0, bad = 0;
  std::string first;
  for (const auto& s : suite) {
    const auto L = s.cfg.cycle_length();
    const std::uint64_t count = (s.result.trace.rounds_executed + L - 1) / L;
    for (std::uint64_t c = 0; c < count; ++c) {
      ++cycles;
      if (!dissemination_check(s.result.trace, c) && bad++ == 0) first = describe(s.cfg) + " cycle=" + std::to_string(c);
    }
  }
  report(5, bad == 0,
         "cycles=" + std::to_string(cycles) + " failed=" + std::to_string(bad) + (bad ? " first=[" + first + "]" : ""));
}

// 6. Single-copy forwarding against the trap never enqueues.
void criterion_impossibility() {
  bool ok = true;
  std::ostringstream os;
  for (std::uint32_t n : {3u, 5u, 8u}) {
    ScenarioConfig cfg;
    cfg.n = n;
    cfg.k = 1;
    cfg.algorithm = Algorithm::NoRep;
    cfg.adversary = AdversaryKind::trap();
    cfg.horizon = Round{10} * n * n;
    const auto r = run(cfg);
    const NodeId origin = r.schedule.issuers().at(0);
    const auto& visited = r.metrics.visited;
    const bool shape = visited.size() == 2 && visited.count(origin) == 1;
    const bool good = r.metrics.enqueue_count == 0 && r.trace.rounds_executed == cfg.horizon && shape;
    ok = ok && good;
    os << "n=" << n << ":enqueues=" << r.metrics.enqueue_count << ",rounds=" << r.trace.rounds_executed
       << ",visited={";
    bool sep = false;
    for (auto v : visited) {
      os << (sep ? "," : "") << v;
      sep = true;
    }
    os << "} ";
  }
  report(6, ok, os.str());
}

// 7. Influence growth on random 1-interval connected traces.
void criterion_influence() {
  std::mt19937_64 rng(77);
  std::size_t bad = 0;
  for (int i = 0; i < 50; ++i) {
    const std::uint32_t n = 2 + static_cast<std::uint32_t>(rng() % 11);
    const auto kind = AdversaryKind::oblivious_random(rng(), (rng() % 3) * 0.1);
    GraphTrace h{n, {}};
    for (Round r = 0; r < Round{2} * n; ++r) h.rounds.push_back(adversary_next_edges(kind, h, std::nullopt, r));
    bool ok = influence_growth_all(h);
    for (NodeId u = 0; u < n && ok; ++u)
      for (Round r = 0; r <= h.rounds.size() && ok; ++r) ok = influence_growth(h, u, r);
    bad += !ok;
  }
  report(7, bad == 0, "traces=50 failed=" + std::to_string(bad));
}

// 8. Byte-identical trace and CSV on re-runs.
void criterion_determinism(const std::vector<SuiteRun>& suite) {
  std::size_t checked = 0, bad = 0;
  for (std::size_t i = 0; i < suite.size(); i += 7) {
    const auto& cfg = suite[i].cfg;
    const auto a = run_single(cfg, std::nullopt, "det");
    const auto b = run_single(cfg, std::nullopt, "det");
    ++checked;
    bad += a.trace_text != b.trace_text || a.csv_text != b.csv_text || a.trace_text != format_trace(suite[i].result.trace);
  }
  SweepGrid grid;
  grid.algorithms = {Algorithm::Alg1, Algorithm::Alg2};
  grid.adversaries = {AdversaryKind::t_stable(0, 0)};
  grid.ns = {6, 9};
  grid.ks = {3, 5};
  grid.Ts = {1, 3};
  grid.seeds = 2;
  const bool sweep_same = run_sweep(grid, 1) == run_sweep(grid, 4);
  report(8, bad == 0 && sweep_same,
         "configs=" + std::to_string(checked) + " differing=" + std::to_string(bad) +
             " sweep_jobs_1_vs_4=" + (sweep_same ? "identical" : "different"));
}

// 9. Queue order follows initiation order (Sequential) or UID order.
void criterion_order(const std::vector<SuiteRun>& suite) {
  std::size_t checked = 0, bad = 0;
  std::string first;
  auto consider = [&](const ScenarioConfig& cfg, const RunResult& r) {
    auto c = check_order(r.trace, cfg.schedule);
    if (!c) return;
    ++checked;
    if (c->status != CheckStatus::Pass && bad++ == 0) first = describe(cfg) + " " + c->detail;
  };
  for (const auto& s : suite) {
    if (s.cfg.schedule == ScheduleKind::sequential() ||
        (s.cfg.algorithm == Algorithm::Alg1 && s.cfg.policy == EnqueuePolicy::LexSmallest &&
         s.cfg.schedule == ScheduleKind::concurrent()))
      consider(s.cfg, s.result);
  }
  for (auto alg : {Algorithm::Alg1, Algorithm::Alg2}) {
    for (auto policy : {EnqueuePolicy::LexSmallest, EnqueuePolicy::FirstArrival}) {
      for (std::uint32_t n : {4u, 7u, 11u}) {
        ScenarioConfig cfg;
        cfg.algorithm = alg;
        cfg.n = n;
        cfg.k = n - 1;
        cfg.T = 2;
        cfg.policy = policy;
        cfg.schedule = ScheduleKind::sequential();
        cfg.adversary = alg == Algorithm::Alg1 ? AdversaryKind::adaptive_line() : AdversaryKind::t_stable(0, 0);
        cfg.seed = n;
        consider(cfg, run(cfg));
      }
    }
  }
  report(9, bad == 0 && checked > 0,
         "checked=" + std::to_string(checked) + " failed=" + std::to_string(bad) + (bad ? " first=[" + first + "]" : ""));
}

}  // namespace

int main() {
  const auto configs = suite_configs(240);
  std::vector<SuiteRun> suite;
  suite.reserve(configs.size());
  const auto start = std::chrono::steady_clock::now();
  for (const auto& cfg : configs) suite.push_back({cfg, run(cfg)});
  for (const auto& s : suite) (void)verify_run(s.cfg, s.result);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  criterion_correctness(suite, seconds);
  criterion_alg1_complexity();
  criterion_alg2_scaling();
  criterion_taillessness(suite);
  criterion_dissemination(suite);
  criterion_impossibility();
  criterion_influence();
  criterion_determinism(suite);
  criterion_order(suite);
  return failures == 0 ? 0 : 1;
}
