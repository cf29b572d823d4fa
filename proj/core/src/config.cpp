#include "dynq/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "text_util.hpp"

namespace dynq {

namespace {

double parse_probability(std::string_view text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) throw ParseError("not a number: '" + std::string(text) + "'");
  return value;
}

std::string format_probability(double p) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, p);
  return ec == std::errc{} ? std::string(buf, ptr) : "0";
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{"n",       "k",    "algorithm", "T",    "adversary",   "schedule",
                                             "policy",  "head", "horizon",   "seed", "termination", "edge_prob"};
  return keys;
}

void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value) {
  const std::string k(key);
  value = detail::trim(value);
  try {
    if (key == "n") {
      cfg.n = detail::parse_uint<std::uint32_t>(value);
    } else if (key == "k") {
      cfg.k = detail::parse_uint<std::uint32_t>(value);
    } else if (key == "algorithm") {
      cfg.algorithm = parse_algorithm(value);
    } else if (key == "T") {
      cfg.T = detail::parse_uint<std::uint32_t>(value);
    } else if (key == "adversary") {
      cfg.adversary = parse_adversary(value);
    } else if (key == "schedule") {
      cfg.schedule = parse_schedule(value);
    } else if (key == "policy") {
      cfg.policy = parse_policy(value);
    } else if (key == "head") {
      cfg.head = detail::parse_uint<NodeId>(value);
    } else if (key == "horizon") {
      cfg.horizon = detail::parse_uint<Round>(value);
    } else if (key == "seed") {
      cfg.seed = detail::parse_uint<std::uint64_t>(value);
    } else if (key == "termination") {
      cfg.termination = parse_termination(value);
    } else if (key == "edge_prob") {
      cfg.edge_prob = parse_probability(value);
    } else {
      throw ConfigError(k, "unknown key");
    }
  } catch (const ParseError& err) {
    throw ConfigError(k, err.what());
  }
}

ScenarioConfig parse_config(std::string_view text, ScenarioConfig base) {
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
      throw ConfigError(std::string(detail::trim(sv)), "line " + std::to_string(lineno) + ": expected key = value");
    }
    auto key = detail::trim(sv.substr(0, eq));
    if (key.empty()) throw ConfigError("", "line " + std::to_string(lineno) + ": missing key");
    apply_setting(base, key, sv.substr(eq + 1));
  }
  return base;
}

ScenarioConfig load_config(const std::filesystem::path& path, ScenarioConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::move(base));
}

std::string format_config(const ScenarioConfig& cfg) {
  std::ostringstream os;
  os << "n = " << cfg.n << "\n"
     << "k = " << cfg.k << "\n"
     << "algorithm = " << to_string(cfg.algorithm) << "\n"
     << "T = " << cfg.T << "\n"
     << "adversary = " << to_string(cfg.adversary) << "\n"
     << "schedule = " << to_string(cfg.schedule) << "\n"
     << "policy = " << to_string(cfg.policy) << "\n"
     << "head = " << cfg.head << "\n"
     << "horizon = " << cfg.horizon << "\n"
     << "seed = " << cfg.seed << "\n"
     << "termination = " << to_string(cfg.termination) << "\n"
     << "edge_prob = " << format_probability(cfg.edge_prob) << "\n";
  return os.str();
}

}  // namespace dynq
