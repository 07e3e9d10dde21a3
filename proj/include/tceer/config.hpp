#pragma once

#include <iosfwd>
#include <string>

#include "tceer/sim.hpp"

namespace tceer {

// Scenario files are `key = value` lines with `#` comments plus an
// optional [flc] section overriding controller terms and rules. Unknown
// keys are rejected; missing keys keep their documented defaults.
SimConfig load_config(std::istream& in, const std::string& source_name);
SimConfig load_config_file(const std::string& path);

// Applies one `key=value` override (same key set as the file body).
void apply_override(SimConfig& cfg, const std::string& key, const std::string& value);

// Fully resolved, reloadable echo of the configuration.
std::string resolved_config_text(const SimConfig& cfg);

}  // namespace tceer
