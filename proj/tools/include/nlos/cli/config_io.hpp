#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlos/simulator.hpp"

namespace nlos::cli {

/// A scenario as read from disk, plus the canonical text used for hashing.
struct LoadedConfig {
  sim::RoomConfig room;
  std::string canonical;  ///< re-serialized JSON, key-sorted
};

/// Parses and validates a scenario document. Throws ConfigError with the
/// offending field path.
LoadedConfig parse_config(std::string_view json_text);

/// Parses a request script: {"requests": [{"tick", "src", "dst"}, ...]}.
std::vector<sim::DataRequest> parse_script(std::string_view json_text);

/// Accepts a decimal or 0x-prefixed hex integer, or a named group
/// ("modp2048") for `n`.
keyagree::BigInt parse_integer(std::string_view text, const std::string& field);

std::string read_file(const std::string& path);

}  // namespace nlos::cli
