// Parameter sweeps and the per-run artifact bundle (trace, report, CSV row).
//
// CSV columns, in order:
//   scenario_id, algorithm, adversary, schedule, policy, n, k, T, alpha,
//   rounds_total, cycles_used, max_tailless, checks_passed, seed
// checks_passed is 1 (all checks pass), 0 (some check failed), NOPROGRESS
// (NoRep never enqueued and nothing unsound was found) or ERR (the run
// aborted, e.g. on an adversary violation).

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dynq/engine.hpp"

namespace dynq {

struct SweepGrid {
  std::vector<Algorithm> algorithms{Algorithm::Alg1};
  std::vector<AdversaryKind> adversaries{AdversaryKind::static_complete()};
  std::vector<ScheduleKind> schedules{ScheduleKind::concurrent()};
  std::vector<EnqueuePolicy> policies{EnqueuePolicy::LexSmallest};
  std::vector<std::uint32_t> ns;
  std::vector<std::uint32_t> ks;
  std::vector<std::uint32_t> Ts{1};
  std::uint32_t seeds = 1;  // seeds per cell
  std::uint64_t seed = 0;   // first seed
  Termination termination = Termination::OracleStop;
  double edge_prob = 0.0;
  Round horizon = 0;
};

/// Same "key = value" format as scenario files; list keys take
/// comma-separated values.
SweepGrid parse_grid(std::string_view text);
SweepGrid load_grid(const std::filesystem::path& path);

struct SweepCell {
  std::string scenario_id;
  ScenarioConfig config;
};

/// Cells in deterministic order (algorithm, adversary, schedule, policy, n,
/// k, T, seed; last varies fastest). Combinations that fail validation, such
/// as k > n - 1, are left out.
std::vector<SweepCell> expand_grid(const SweepGrid& grid);

std::string csv_header();

/// "1", "0" or "NOPROGRESS".
std::string classify(const ScenarioConfig& cfg, const Report& report);

std::string metrics_csv_row(const std::string& scenario_id, const ScenarioConfig& cfg, const Metrics& metrics,
                            const std::string& checks_passed);
std::string error_csv_row(const std::string& scenario_id, const ScenarioConfig& cfg);

/// Runs every cell on `jobs` worker threads and returns the whole CSV
/// (header included). Rows come out in grid order.
std::string run_sweep(const SweepGrid& grid, unsigned jobs = 1);

struct SingleRun {
  RunResult result;
  Report report;
  std::string status;  // as in classify()
  std::string trace_text;
  std::string report_text;
  std::string csv_text;  // header plus one row
  int exit_code = 0;
};

/// Runs, verifies and renders one scenario. Writes <name>.trace,
/// <name>.report and <name>.csv under `out_dir` when given.
SingleRun run_single(const ScenarioConfig& cfg, const std::optional<std::filesystem::path>& out_dir = std::nullopt,
                     const std::string& name = "run");

}  // namespace dynq
