#pragma once

#include <string>
#include <vector>

#include "flocksim/sim_config.hpp"

namespace flocksim {

/// Parses `key = value` text (UTF-8, '#' comments, dotted keys for grouping).
/// Unknown keys, duplicate keys, type mismatches and out-of-range values are
/// errors naming the offending line.
SimConfig parse_config_text(const std::string& text);
SimConfig parse_config_file(const std::string& path);

/// Canonical serialization; parse(serialize(c)) == c exactly (floats are
/// written in shortest round-trip form).
std::string serialize_config(const SimConfig& cfg);

/// Assigns one schema key from its text value. Shared by the parser and the
/// sweep driver so the schema has a single source of truth. Throws
/// ConfigError on unknown key or bad value.
void set_config_key(SimConfig& cfg, const std::string& key, const std::string& value);

/// All schema keys, in canonical order.
std::vector<std::string> config_keys();

}  // namespace flocksim
