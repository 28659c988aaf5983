#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nlos/cli/commands.hpp"
#include "nlos/cli/trace.hpp"

namespace {

std::array<double, 2> parse_pair(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw CLI::ValidationError("anchor", "expected x,y");
  return {std::stod(text.substr(0, comma)), std::stod(text.substr(comma + 1))};
}

}  // namespace

int main(int argc, char** argv) {
  using namespace nlos::cli;

  CLI::App app{"Indoor optical wireless link simulator and calculators"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersionString);

  SimulateOptions sim;
  std::string seed_text;
  auto* simulate = app.add_subcommand("simulate", "Run a scenario and write its event trace");
  simulate->add_option("--config,-c", sim.config_path, "Scenario JSON")->required();
  simulate->add_option("--ticks,-t", sim.ticks, "Number of ticks to run")->capture_default_str();
  simulate->add_option("--seed", seed_text, "Override the config seed");
  simulate->add_option("--script", sim.script_path, "Request script JSON");
  simulate->add_option("--out,-o", sim.out_path, "Trace output path (default: stdout)");

  CoverageOptions cov;
  auto* coverage = app.add_subcommand("coverage", "Cell power / radius calculator");
  auto* power_flag = coverage->add_flag("--power", "Compute the launch power P from Ir, W, r");
  auto* radius_flag = coverage->add_flag("--radius", "Compute the maximum radius r from P, Ir");
  power_flag->excludes(radius_flag);
  coverage->add_option("--ir", cov.sensitivity, "Receiver sensitivity, W/m^2");
  coverage->add_option("--w", cov.beam_radius, "Beam radius at the floor, m");
  coverage->add_option("--r", cov.cell_radius, "Cell radius, m");
  coverage->add_option("--p", cov.launch_power, "Launch power, W");

  TrilaterateOptions tri;
  std::vector<std::string> anchors;
  std::vector<double> distances;
  auto* trilaterate = app.add_subcommand("trilaterate", "Solve a position from three ranges");
  trilaterate->add_option("--anchor", anchors, "Receiver position x,y (three times)")
      ->expected(3)
      ->required();
  trilaterate->add_option("--distances", distances, "Three measured distances, m")
      ->expected(3)
      ->required();

  KeyAgreeOptions ka;
  std::string ka_seed;
  auto* keyagree = app.add_subcommand("keyagree", "Run a scripted two-party key agreement");
  keyagree->add_option("--n", ka.n, "Prime modulus (decimal, 0x hex, or modp2048)")
      ->capture_default_str();
  keyagree->add_option("--g", ka.g, "Generator")->capture_default_str();
  keyagree->add_option("--password-a", ka.password_a, "Initiator password")->required();
  keyagree->add_option("--password-b", ka.password_b, "Responder password")->required();
  keyagree->add_option("--a", ka.a, "Initiator secret exponent");
  keyagree->add_option("--b", ka.b, "Responder secret exponent");
  keyagree->add_option("--seed", ka.seed, "Seed for sampled exponents");
  keyagree->add_option("--force-m", ka.force_m, "Debug: use this M on both sides");

  try {
    app.parse(argc, argv);
    if (!seed_text.empty()) sim.seed_override = std::stoull(seed_text);
    if (trilaterate->parsed()) {
      for (std::size_t i = 0; i < 3; ++i) {
        tri.anchors[i] = parse_pair(anchors.at(i));
        tri.distances[i] = distances.at(i);
      }
    }
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  }

  if (simulate->parsed()) return cmd_simulate(sim, std::cout, std::cerr);
  if (coverage->parsed()) {
    if (*power_flag == *radius_flag) {
      std::cerr << "error: choose exactly one of --power or --radius\n";
      return kConfigError;
    }
    cov.mode = *radius_flag ? CoverageOptions::Mode::Radius : CoverageOptions::Mode::Power;
    return cmd_coverage(cov, std::cout, std::cerr);
  }
  if (trilaterate->parsed()) return cmd_trilaterate(tri, std::cout, std::cerr);
  return cmd_keyagree(ka, std::cout, std::cerr);
}
