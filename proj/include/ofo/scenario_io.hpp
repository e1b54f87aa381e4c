#pragma once

#include <string>

#include "ofo/scenario.hpp"

namespace ofo {

/// Load a scenario description from JSON. Network references inside the file
/// may be fixture names ("cigre_mv", "lv_feeder:<seed>") or paths to network
/// JSON files, resolved relative to the scenario file's directory.
Scenario load_scenario_json(const std::string& path);
Scenario parse_scenario_json(const std::string& text, const std::string& origin = "<string>",
                             const std::string& base_dir = ".");

} // namespace ofo
