#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

// Subcommand bodies, separated from argument parsing so tests can drive them
// in-process. Each returns the process exit code.
namespace nlos::cli {

enum ExitCode : int {
  kOk = 0,
  kConfigError = 1,
  kProtocolViolation = 2,
  kKeyMismatch = 3,
};

struct SimulateOptions {
  std::string config_path;
  std::int64_t ticks = 100;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::string> script_path;
  std::optional<std::string> out_path;  ///< stdout when empty
};

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);

struct CoverageOptions {
  enum class Mode { Power, Radius } mode = Mode::Power;
  std::optional<double> sensitivity;  ///< I_r
  std::optional<double> beam_radius;  ///< W
  std::optional<double> cell_radius;  ///< r
  std::optional<double> launch_power;  ///< P
};

int cmd_coverage(const CoverageOptions& opts, std::ostream& out, std::ostream& err);

struct TrilaterateOptions {
  std::array<std::array<double, 2>, 3> anchors{};
  std::array<double, 3> distances{};
};

int cmd_trilaterate(const TrilaterateOptions& opts, std::ostream& out, std::ostream& err);

struct KeyAgreeOptions {
  std::string n = "modp2048";
  std::string g = "2";
  std::string password_a;
  std::string password_b;
  std::optional<std::string> a;
  std::optional<std::string> b;
  std::uint64_t seed = 0;           ///< exponent sampling when a or b is absent
  std::optional<std::string> force_m;  ///< debug: same M on both sides
};

int cmd_keyagree(const KeyAgreeOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace nlos::cli
