#pragma once

#include "attractor/density.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace attractor {

/// Parses an INI-style run description:
///
///     preset = example1          ; optional, expanded first
///     [system]
///     name = eight
///     params.mu = 0.5
///     [domain]
///     lo = -1.5, -1.5
///     hi = 1.5, 1.5
///     [grid]
///     counts = 30, 30
///     [time]
///     dt = 0.01
///     horizon = 20
///     [run]
///     iterations = 4
///     workers = 1
///
/// Unknown sections or keys are rejected. The result is validated.
RunConfig parse_config(std::string_view text);

RunConfig load_config(const std::filesystem::path& path);

/// Serializes a config back into the format accepted by parse_config.
std::string format_config(const RunConfig& config);

/// Built-in settings for the four reference experiments.
RunConfig preset(std::string_view name);
std::vector<std::string> preset_names();
std::string preset_description(std::string_view name);

} // namespace attractor
