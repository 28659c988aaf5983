#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "nlos/simulator.hpp"

namespace nlos::cli {

inline constexpr const char* kToolName = "nlos";
inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kToolVersionString = "nlos 1.0.0";

struct TraceHeader {
  std::string config_sha256;
  std::uint64_t seed = 0;
  std::int64_t ticks = 0;
  std::size_t modulus_bits = 0;
};

/// Line-delimited JSON: a header record, then one record per event with
/// fields tick, seq (per-tick sequence), kind, node, payload. LF endings.
/// Reals carry 12 significant digits.
std::string format_trace(const TraceHeader& header, std::span<const sim::SimEvent> events);

}  // namespace nlos::cli
