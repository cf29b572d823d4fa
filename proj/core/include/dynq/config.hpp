// Flat "key = value" scenario files. Keys are exactly the ScenarioConfig
// field names; '#' starts a comment.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dynq/engine.hpp"

namespace dynq {

const std::vector<std::string>& config_keys();

/// Sets one field from its text form. Throws ConfigError naming the key.
void apply_setting(ScenarioConfig& cfg, std::string_view key, std::string_view value);

/// Parses a config file body on top of `base`. Does not validate.
ScenarioConfig parse_config(std::string_view text, ScenarioConfig base = {});
ScenarioConfig load_config(const std::filesystem::path& path, ScenarioConfig base = {});

/// Canonical text form; parse_config(format_config(c)) == c.
std::string format_config(const ScenarioConfig& cfg);

}  // namespace dynq
