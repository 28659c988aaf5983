#include "nlos/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <random>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "nlos/cli/config_io.hpp"
#include "nlos/cli/trace.hpp"
#include "nlos/coverage.hpp"
#include "nlos/errors.hpp"
#include "nlos/key_agreement.hpp"
#include "nlos/positioning.hpp"
#include "nlos/simulator.hpp"

namespace nlos::cli {

namespace kp = nlos::keyagree;

namespace {

std::string show(const kp::BigInt& v, bool demo) {
  return demo ? v.str() : "0x" + v.str(0, std::ios_base::hex);
}

}  // namespace

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
  std::vector<sim::SimEvent> events;
  TraceHeader header;
  try {
    if (opts.ticks < 0) throw ConfigError("ticks", "must be >= 0");
    LoadedConfig loaded = parse_config(read_file(opts.config_path));
    if (opts.seed_override) loaded.room.rng_seed = *opts.seed_override;
    std::vector<sim::DataRequest> requests;
    if (opts.script_path) requests = parse_script(read_file(*opts.script_path));
    sim::validate_requests(loaded.room, requests);

    const auto digest = kp::sha256(std::span(
        reinterpret_cast<const std::uint8_t*>(loaded.canonical.data()), loaded.canonical.size()));
    header.config_sha256 = kp::to_hex(digest);
    header.seed = loaded.room.rng_seed;
    header.ticks = opts.ticks;
    header.modulus_bits = boost::multiprecision::msb(loaded.room.params.n()) + 1;
    events = sim::run(std::move(loaded.room), opts.ticks, requests);
  } catch (const ConfigError& e) {
    fmt::print(err, "config error: {}\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kConfigError;
  }

  const std::string text = format_trace(header, events);
  if (opts.out_path) {
    std::ofstream file(*opts.out_path, std::ios::binary | std::ios::trunc);
    file << text;
    if (!file) {
      fmt::print(err, "error: cannot write '{}'\n", *opts.out_path);
      return kConfigError;
    }
  } else {
    out << text;
  }

  const auto misses = std::count_if(events.begin(), events.end(), [](const sim::SimEvent& e) {
    const auto* s = std::get_if<sim::SearchPerformed>(&e.payload);
    return s && !s->found;
  });
  if (misses > 0) {
    fmt::print(err, "protocol violation: {} search miss(es)\n", misses);
    return kProtocolViolation;
  }
  return kOk;
}

int cmd_coverage(const CoverageOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    if (!opts.sensitivity) throw DomainError("--ir is required");
    double value = 0.0;
    if (opts.mode == CoverageOptions::Mode::Power) {
      if (!opts.beam_radius || !opts.cell_radius) {
        throw DomainError("--power needs --ir, --w and --r");
      }
      value = coverage::required_launch_power(*opts.sensitivity, *opts.beam_radius,
                                              *opts.cell_radius);
    } else {
      if (!opts.launch_power) throw DomainError("--radius needs --p and --ir");
      value = coverage::max_cell_radius(*opts.launch_power, *opts.sensitivity);
    }
    fmt::print(out, "{:#.10g}\n", value);
    return kOk;
  } catch (const DomainError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kConfigError;
  }
}

int cmd_trilaterate(const TrilaterateOptions& opts, std::ostream& out, std::ostream& err) {
  std::array<positioning::UltrasonicReceiver, 3> receivers;
  for (std::size_t i = 0; i < 3; ++i) {
    receivers[i] = {"p" + std::to_string(i + 1), {opts.anchors[i][0], opts.anchors[i][1]}};
  }
  try {
    const Point2D p = positioning::trilaterate(receivers, opts.distances);
    auto tidy = [](double v) { return std::abs(v) < 1e-12 ? 0.0 : v; };
    fmt::print(out, "({:.10g},{:.10g})\n", tidy(p.x), tidy(p.y));
    return kOk;
  } catch (const DegenerateConfiguration& e) {
    fmt::print(err, "degenerate anchors: {}\n", e.what());
  } catch (const DomainError& e) {
    fmt::print(err, "error: {}\n", e.what());
  }
  return kConfigError;
}

int cmd_keyagree(const KeyAgreeOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    const kp::BigInt g = parse_integer(opts.g, "g");
    const kp::PublicParams params = opts.n == "modp2048" && g == 2
                                        ? kp::PublicParams::modp2048()
                                        : kp::PublicParams(parse_integer(opts.n, "n"), g);
    const bool demo = params.demo_scale();

    kp::PasswordDigest da;
    kp::PasswordDigest db;
    if (opts.force_m) {
      da = kp::digest_from_seed_value(parse_integer(*opts.force_m, "force-m"), params);
      db = da;
    } else {
      da = kp::derive_digest(opts.password_a, params);
      db = kp::derive_digest(opts.password_b, params);
    }

    std::mt19937_64 rng(sim::mix_seed(opts.seed, 0x6b657961677265ULL));
    const kp::BigInt a = opts.a ? parse_integer(*opts.a, "a") : kp::sample_exponent(params, rng);
    const kp::BigInt b = opts.b ? parse_integer(*opts.b, "b") : kp::sample_exponent(params, rng);

    const kp::HandshakeResult r = kp::run_handshake(da, db, params, a, b);
    fmt::print(out, "params: n={} ({} bits) g={}\n", show(params.n(), demo),
               boost::multiprecision::msb(params.n()) + 1, show(params.g(), demo));
    if (demo) {
      fmt::print(out, "digest_a: M={} M_inv={}\n", da.m.str(), da.m_inv.str());
      fmt::print(out, "digest_b: M={} M_inv={}\n", db.m.str(), db.m_inv.str());
    }
    fmt::print(out, "K1={}\n", show(r.transcript.at(0).value, demo));
    fmt::print(out, "K2={}\n", show(r.transcript.at(1).value, demo));
    if (demo) {
      fmt::print(out, "key_initiator={}\n", r.key_initiator.str());
      fmt::print(out, "key_responder={}\n", r.key_responder.str());
    }
    fmt::print(out, "fingerprint_initiator={}\n", kp::key_fingerprint(r.key_initiator));
    fmt::print(out, "fingerprint_responder={}\n", kp::key_fingerprint(r.key_responder));
    if (!r.keys_match()) {
      fmt::print(out, "keys differ\n");
      return kKeyMismatch;
    }
    fmt::print(out, "keys match\n");
    return kOk;
  } catch (const std::exception& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kConfigError;
  }
}

}  // namespace nlos::cli
