#include "dynq/sweep.hpp"

#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include "dynq/config.hpp"
#include "text_util.hpp"

namespace dynq {

namespace {

template <typename T, typename Parse>
std::vector<T> parse_list(std::string_view value, Parse parse) {
  std::vector<T> out;
  for (auto item : detail::split(value, ',')) {
    item = detail::trim(item);
    if (!item.empty()) out.push_back(parse(item));
  }
  return out;
}

std::uint32_t parse_u32(std::string_view s) { return detail::parse_uint<std::uint32_t>(s); }

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

SweepGrid parse_grid(std::string_view text) {
  SweepGrid grid;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv = line;
    if (auto hash = sv.find('#'); hash != std::string_view::npos) sv = sv.substr(0, hash);
    sv = detail::trim(sv);
    if (sv.empty()) continue;
    auto eq = sv.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(sv), "line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key(detail::trim(sv.substr(0, eq)));
    const auto value = detail::trim(sv.substr(eq + 1));
    try {
      if (key == "algorithm") {
        grid.algorithms = parse_list<Algorithm>(value, parse_algorithm);
      } else if (key == "adversary") {
        grid.adversaries = parse_list<AdversaryKind>(value, parse_adversary);
      } else if (key == "schedule") {
        grid.schedules = parse_list<ScheduleKind>(value, parse_schedule);
      } else if (key == "policy") {
        grid.policies = parse_list<EnqueuePolicy>(value, parse_policy);
      } else if (key == "n") {
        grid.ns = parse_list<std::uint32_t>(value, parse_u32);
      } else if (key == "k") {
        grid.ks = parse_list<std::uint32_t>(value, parse_u32);
      } else if (key == "T") {
        grid.Ts = parse_list<std::uint32_t>(value, parse_u32);
      } else if (key == "seeds") {
        grid.seeds = parse_u32(value);
      } else if (key == "seed") {
        grid.seed = detail::parse_uint<std::uint64_t>(value);
      } else if (key == "termination") {
        grid.termination = parse_termination(value);
      } else if (key == "horizon") {
        grid.horizon = detail::parse_uint<Round>(value);
      } else if (key == "edge_prob") {
        ScenarioConfig probe;
        apply_setting(probe, key, value);
        grid.edge_prob = probe.edge_prob;
      } else {
        throw ConfigError(key, "unknown key");
      }
    } catch (const ParseError& err) {
      throw ConfigError(key, err.what());
    }
  }
  return grid;
}

SweepGrid load_grid(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read grid file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_grid(buf.str());
}

std::vector<SweepCell> expand_grid(const SweepGrid& grid) {
  std::vector<SweepCell> cells;
  std::size_t index = 0;
  for (auto algorithm : grid.algorithms) {
    for (const auto& adversary : grid.adversaries) {
      for (const auto& schedule : grid.schedules) {
        for (auto policy : grid.policies) {
          for (auto n : grid.ns) {
            for (auto k : grid.ks) {
              for (auto T : grid.Ts) {
                for (std::uint32_t i = 0; i < grid.seeds; ++i) {
                  ScenarioConfig cfg;
                  cfg.n = n;
                  cfg.k = k;
                  cfg.algorithm = algorithm;
                  cfg.T = T;
                  cfg.adversary = adversary;
                  cfg.schedule = schedule;
                  cfg.policy = policy;
                  cfg.horizon = grid.horizon;
                  cfg.seed = grid.seed + i;
                  cfg.termination = grid.termination;
                  cfg.edge_prob = grid.edge_prob;
                  try {
                    cfg.validate();
                  } catch (const ConfigError&) {
                    continue;
                  }
                  cells.push_back({"s" + std::to_string(index++), cfg});
                }
              }
            }
          }
        }
      }
    }
  }
  return cells;
}

std::string csv_header() {
  return "scenario_id,algorithm,adversary,schedule,policy,n,k,T,alpha,rounds_total,cycles_used,max_tailless,"
         "checks_passed,seed\n";
}

std::string classify(const ScenarioConfig& cfg, const Report& report) {
  if (report.passed()) return "1";
  if (cfg.algorithm == Algorithm::NoRep && !report.unsound()) return "NOPROGRESS";
  return "0";
}

namespace {

std::string row_prefix(const std::string& scenario_id, const ScenarioConfig& cfg) {
  std::ostringstream os;
  os << scenario_id << ',' << to_string(cfg.algorithm) << ',' << to_string(cfg.effective_adversary()) << ','
     << to_string(cfg.schedule) << ',' << to_string(cfg.policy) << ',' << cfg.n << ',' << cfg.k << ',' << cfg.T;
  return os.str();
}

}  // namespace

std::string metrics_csv_row(const std::string& scenario_id, const ScenarioConfig& cfg, const Metrics& metrics,
                            const std::string& checks_passed) {
  std::ostringstream os;
  os << row_prefix(scenario_id, cfg) << ',' << metrics.alpha << ',' << metrics.rounds_total << ','
     << metrics.cycles_used << ',' << metrics.max_tailless_span << ',' << checks_passed << ',' << cfg.seed << '\n';
  return os.str();
}

std::string error_csv_row(const std::string& scenario_id, const ScenarioConfig& cfg) {
  return row_prefix(scenario_id, cfg) + ",0,0,0,0,ERR," + std::to_string(cfg.seed) + "\n";
}

std::string run_sweep(const SweepGrid& grid, unsigned jobs) {
  const auto cells = expand_grid(grid);
  std::vector<std::string> rows(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      const auto& cell = cells[i];
      try {
        auto result = run(cell.config);
        auto report = verify_run(cell.config, result);
        rows[i] = metrics_csv_row(cell.scenario_id, cell.config, result.metrics, classify(cell.config, report));
      } catch (const std::exception&) {
        rows[i] = error_csv_row(cell.scenario_id, cell.config);
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(cells.size(), 1))));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::string out = csv_header();
  for (const auto& r : rows) out += r;
  return out;
}

SingleRun run_single(const ScenarioConfig& cfg, const std::optional<std::filesystem::path>& out_dir,
                     const std::string& name) {
  SingleRun s;
  s.result = run(cfg);
  s.report = verify_run(cfg, s.result);
  s.status = classify(cfg, s.report);
  s.trace_text = format_trace(s.result.trace);
  s.report_text = s.report.format();
  s.csv_text = csv_header() + metrics_csv_row(name, cfg, s.result.metrics, s.status);
  s.exit_code = s.status == "0" ? 1 : 0;
  if (out_dir) {
    std::filesystem::create_directories(*out_dir);
    write_file(*out_dir / (name + ".trace"), s.trace_text);
    write_file(*out_dir / (name + ".report"), s.report_text);
    write_file(*out_dir / (name + ".csv"), s.csv_text);
  }
  return s;
}

}  // namespace dynq
