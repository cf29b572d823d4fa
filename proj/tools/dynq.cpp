// dynq: run scenarios, sweeps and trace checks from the command line.
//
// Exit status: 0 when every check passes (or the NoRep demo shows no
// progress), 1 when a check fails, 2 on bad configuration or input.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "dynq/config.hpp"
#include "dynq/sweep.hpp"
#include "dynq/trace.hpp"
#include "dynq/verify.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitCheckFailed = 1;
constexpr int kExitBadInput = 2;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw dynq::ConfigError("", "cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::optional<fs::path> default_out_dir() {
  if (const char* env = std::getenv("DYNQ_OUT_DIR"); env && *env) return fs::path(env);
  return std::nullopt;
}

dynq::ScenarioConfig resolve_config(const std::string& path, const std::map<std::string, std::string>& overrides) {
  dynq::ScenarioConfig cfg = path.empty() ? dynq::ScenarioConfig{} : dynq::load_config(path);
  for (const auto& [key, value] : overrides) dynq::apply_setting(cfg, key, value);
  cfg.validate();
  return cfg;
}

int cmd_run(const std::string& config_path, const std::map<std::string, std::string>& overrides,
            const std::string& out_dir, const std::string& name) {
  const auto cfg = resolve_config(config_path, overrides);
  std::optional<fs::path> dir = out_dir.empty() ? default_out_dir() : std::optional<fs::path>(out_dir);
  const auto single = dynq::run_single(cfg, dir, name);
  std::cout << single.report_text;
  if (single.status == "NOPROGRESS") {
    std::cout << "NOPROGRESS rounds=" << single.result.metrics.rounds_total
              << " visited=" << single.result.metrics.visited.size() << "\n";
  }
  std::cout << single.csv_text;
  return single.exit_code;
}

int cmd_sweep(const std::string& grid_path, const std::string& out, unsigned jobs) {
  const auto grid = dynq::load_grid(grid_path);
  const auto csv = dynq::run_sweep(grid, jobs);
  if (out.empty()) {
    std::cout << csv;
  } else {
    write_file(out, csv);
  }
  return 0;
}

int cmd_verify(const std::string& trace_path, const std::string& schedule) {
  const auto trace = dynq::parse_trace(read_file(trace_path));
  dynq::VerifyOptions options;
  if (!schedule.empty()) options.schedule = dynq::parse_schedule(schedule);
  const auto report = dynq::verify_trace(trace, options);
  std::cout << report.format();
  return report.unsound() ? kExitCheckFailed : 0;
}

int cmd_export_graph(const std::string& out, const std::string& config_path,
                     const std::map<std::string, std::string>& overrides, const std::string& trace_path) {
  dynq::Trace trace;
  if (!trace_path.empty()) {
    trace = dynq::parse_trace(read_file(trace_path));
  } else {
    trace = dynq::run(resolve_config(config_path, overrides)).trace;
  }
  const auto text = dynq::format_graph_trace(trace.graph_history());
  if (out == "-") {
    std::cout << text;
  } else {
    write_file(out, text);
  }
  return 0;
}

void add_overrides(CLI::App* app, std::map<std::string, std::string>& overrides) {
  for (const auto& key : dynq::config_keys()) {
    app->add_option_function<std::string>(
        "--" + key, [&overrides, key](const std::string& v) { overrides[key] = v; },
        "override the config value of " + key);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for distributed queuing in adversarial dynamic networks"};
  app.require_subcommand(1);

  std::map<std::string, std::string> overrides;
  std::string config_path;
  std::string out_dir;
  std::string name = "run";
  auto* run = app.add_subcommand("run", "run one scenario and verify it");
  run->add_option("--config", config_path, "scenario file (key = value lines)");
  run->add_option("--out-dir", out_dir, "directory for .trace/.report/.csv (default $DYNQ_OUT_DIR)");
  run->add_option("--name", name, "artifact base name and scenario_id")->capture_default_str();
  add_overrides(run, overrides);

  std::string grid_path;
  std::string sweep_out;
  unsigned jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "run a parameter grid and emit a CSV table");
  sweep->add_option("grid", grid_path, "grid file")->required();
  sweep->add_option("-o,--out", sweep_out, "CSV output path (default stdout)");
  sweep->add_option("-j,--jobs", jobs, "worker threads")->capture_default_str();

  std::string trace_path;
  std::string schedule;
  auto* verify = app.add_subcommand("verify-trace", "re-run every check on a stored trace");
  verify->add_option("trace", trace_path, "trace file")->required();
  verify->add_option("--schedule", schedule, "schedule kind, enables the order checks");

  std::string graph_out;
  std::string graph_trace;
  std::string graph_config;
  std::map<std::string, std::string> graph_overrides;
  auto* exporter = app.add_subcommand("export-graph", "write the per-round graphs of a run");
  exporter->add_option("file", graph_out, "output file, '-' for stdout")->required();
  auto* from_config = exporter->add_option("--config", graph_config, "scenario to simulate");
  exporter->add_option("--trace", graph_trace, "existing trace to read instead")->excludes(from_config);
  add_overrides(exporter, graph_overrides);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitBadInput;
  }

  try {
    if (*run) return cmd_run(config_path, overrides, out_dir, name);
    if (*sweep) return cmd_sweep(grid_path, sweep_out, jobs);
    if (*verify) return cmd_verify(trace_path, schedule);
    if (*exporter) return cmd_export_graph(graph_out, graph_config, graph_overrides, graph_trace);
  } catch (const dynq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const dynq::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const dynq::TooManyRequests& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCheckFailed;
  }
  return 0;
}
