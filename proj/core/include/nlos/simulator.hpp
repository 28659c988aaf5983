#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nlos/coverage.hpp"
#include "nlos/geometry.hpp"
#include "nlos/key_agreement.hpp"
#include "nlos/location.hpp"
#include "nlos/positioning.hpp"

// Discrete-tick simulation of the whole indoor system: mobile nodes move
// along waypoints, are tracked ultrasonically, report through the location
// database, and exchange an enciphered message through the ceiling backend.
namespace nlos::sim {

using location::CellId;

struct GridSpec {
  int rows = 0;
  int cols = 0;
  double cell_size = 0.0;
  std::set<CellId> reporting;
  location::Adjacency adjacency = location::Adjacency::Four;
};

struct MobileNode {
  std::string node_id;
  Point2D position;  ///< start position
  std::vector<Point2D> waypoints;
  double speed = 0.0;  ///< m/s
  std::string password;
};

struct RoomConfig {
  double width = 0.0;
  double height = 0.0;
  double tick_duration = 1.0;  ///< seconds
  GridSpec grid;
  coverage::GaussianBeam beam;  ///< one per ceiling transceiver, centered in its cell
  coverage::ReceiverSpec receiver;
  std::vector<positioning::UltrasonicReceiver> ultrasonic_receivers;
  double speed_of_sound = positioning::kDefaultSpeedOfSound;
  double tof_noise_sigma = 0.0;  ///< seconds
  keyagree::PublicParams params = keyagree::PublicParams::modp2048();
  std::uint64_t rng_seed = 0;
  std::vector<MobileNode> nodes;
};

struct DataRequest {
  std::int64_t tick = 0;
  std::string src;
  std::string dst;
};

/// Throws ConfigError naming the first offending field.
void validate(const RoomConfig& config);
void validate_requests(const RoomConfig& config, std::span<const DataRequest> requests);

/// Beam whose radius is optimal for the cell circumradius and whose power
/// just reaches `receiver` at the cell corners.
coverage::GaussianBeam default_beam(double cell_size, const coverage::ReceiverSpec& receiver);

enum class EventKind {
  PositionEstimated,
  CellEntered,
  LocationUpdated,
  SearchPerformed,
  LinkEstablished,
  HandshakeCompleted,
  MessageDelivered,
  LinkLost,
};

const char* to_string(EventKind kind) noexcept;

struct PositionEstimated {
  std::optional<Point2D> estimate;  ///< empty when `error` is set
  Point2D truth;
  std::optional<std::string> error;
};

struct CellEntered {
  CellId cell;
  bool reporting = false;
};

struct LocationUpdated {
  CellId cell;
  std::optional<CellId> previous;
  bool initial_attach = false;
};

struct SearchPerformed {
  std::string requester;
  std::optional<CellId> last_reported;
  std::size_t vicinity_size = 0;  ///< cells eligible for probing
  std::vector<CellId> probed;
  std::optional<CellId> found;  ///< empty on a search miss
};

struct LinkEstablished {
  CellId cell;
  double offset = 0.0;
  double irradiance = 0.0;
  std::optional<double> received_power;
};

struct HandshakeCompleted {
  std::string peer;
  std::string fingerprint_initiator;
  std::string fingerprint_responder;
  std::size_t transcript_bytes = 0;
  bool keys_match = false;
};

struct MessageDelivered {
  std::string src;
  std::size_t bytes = 0;
  std::string ciphertext_fingerprint;
  bool round_trip_match = false;
};

struct LinkLost {
  CellId cell;
  double offset = 0.0;
  double irradiance = 0.0;
};

// Alternative order must follow EventKind.
using EventPayload = std::variant<PositionEstimated, CellEntered, LocationUpdated, SearchPerformed,
                                  LinkEstablished, HandshakeCompleted, MessageDelivered, LinkLost>;

struct SimEvent {
  std::int64_t tick = 0;
  std::string node;
  EventPayload payload;

  EventKind kind() const noexcept { return static_cast<EventKind>(payload.index()); }
};

/// XOR with the keystream SHA-256(key || counter_be64), counter from 0.
/// Applying it twice with the same key restores the input.
keyagree::Bytes apply_keystream(const keyagree::BigInt& key, std::span<const std::uint8_t> data);

struct NodeState {
  MobileNode spec;
  Point2D position;
  std::size_t next_waypoint = 0;
  std::optional<Point2D> estimate;
  std::optional<Point2D> last_mapped;  ///< last estimate that was mapped to a cell
  std::optional<CellId> tracked_cell;
  bool connected = false;
  keyagree::PasswordDigest digest;
};

class World {
 public:
  /// Validates `config`; throws ConfigError.
  explicit World(RoomConfig config);

  std::int64_t tick() const noexcept { return tick_; }
  const RoomConfig& config() const noexcept { return config_; }
  const location::CellGrid& grid() const noexcept { return grid_; }
  const location::LocationDB& db() const noexcept { return db_; }
  const std::vector<NodeState>& nodes() const noexcept { return nodes_; }
  const NodeState& node(std::string_view id) const;

  /// Receivers used for trilateration: the triple with the largest area.
  std::span<const positioning::UltrasonicReceiver, 3> solver_receivers() const noexcept {
    return std::span<const positioning::UltrasonicReceiver, 3>(solver_receivers_);
  }

  /// Advances one tick: movement, ranging, cell mapping, location update,
  /// connectivity, in that order across all nodes.
  std::vector<SimEvent> step();

  /// Pages `dst`, activates its cell, runs the handshake between `src` and
  /// `dst` and delivers one enciphered test message.
  std::vector<SimEvent> request_data(const std::string& src, const std::string& dst);

 private:
  Point2D clamp_to_room(Point2D p) const noexcept;
  void advance(NodeState& node) const;
  std::vector<CellId> cells_crossed(const NodeState& node, Point2D to, CellId new_cell) const;

  RoomConfig config_;
  location::CellGrid grid_;
  location::LocationDB db_;
  std::vector<NodeState> nodes_;
  std::array<positioning::UltrasonicReceiver, 3> solver_receivers_;
  std::array<std::size_t, 3> solver_index_{};
  std::mt19937_64 crypto_rng_;
  std::int64_t tick_ = 0;
};

/// Runs `ticks` steps from tick 1, issuing each scripted request after the
/// step of its tick. Requests scheduled after `ticks` never fire.
std::vector<SimEvent> run(RoomConfig config, std::int64_t ticks,
                          std::span<const DataRequest> requests);

/// Mixes seed material for an independent, reproducible substream.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) noexcept;

}  // namespace nlos::sim
