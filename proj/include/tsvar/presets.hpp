#pragma once

#include <string>
#include <vector>

#include "tsvar/config.hpp"

namespace tsvar {

/// One entry of the built-in problem catalog.
struct PresetInfo {
  std::string name;
  /// The command the preset is meant for: classify, solve, noether or
  /// convergence.  Other commands may still run it when they can.
  std::string command;
  std::string description;
};

/// All built-in presets, in catalog order.
[[nodiscard]] const std::vector<PresetInfo>& preset_catalog();

/// The configuration of a named preset as a JSON document; the result parses
/// with parse_config.  Throws ConfigError for unknown names.
[[nodiscard]] nlohmann::ordered_json preset_json(const std::string& name);

/// The parsed configuration of a named preset.
[[nodiscard]] ProblemConfig preset_config(const std::string& name);

}  // namespace tsvar
