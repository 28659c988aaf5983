#include "nlos/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>
#include <string>

#include "nlos/errors.hpp"

namespace nlos::sim {

namespace kp = nlos::keyagree;
namespace loc = nlos::location;
namespace pos = nlos::positioning;

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t kCryptoStream = 0x6b657961677265ULL;

bool nearly_equal(double a, double b) {
  return std::abs(a - b) <= 1e-9 * std::max({1.0, std::abs(a), std::abs(b)});
}

bool inside(Point2D p, double width, double height) {
  return is_finite(p) && p.x >= 0.0 && p.y >= 0.0 && p.x <= width && p.y <= height;
}

std::string indexed(const char* base, std::size_t i, const char* leaf = nullptr) {
  std::string out = std::string(base) + "[" + std::to_string(i) + "]";
  if (leaf) out += std::string(".") + leaf;
  return out;
}

// Indices of the receiver triple with the largest triangle area; the first
// such triple in lexicographic order wins ties.
std::pair<std::array<std::size_t, 3>, double> best_triple(
    std::span<const pos::UltrasonicReceiver> receivers) {
  std::array<std::size_t, 3> best{0, 1, 2};
  double best_area = -1.0;
  for (std::size_t i = 0; i < receivers.size(); ++i) {
    for (std::size_t j = i + 1; j < receivers.size(); ++j) {
      for (std::size_t k = j + 1; k < receivers.size(); ++k) {
        const double area = triangle_area(receivers[i].position, receivers[j].position,
                                          receivers[k].position);
        if (area > best_area) {
          best_area = area;
          best = {i, j, k};
        }
      }
    }
  }
  return {best, best_area};
}

const RoomConfig& validated(const RoomConfig& config) {
  validate(config);
  return config;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept {
  return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
}

const char* to_string(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::PositionEstimated: return "PositionEstimated";
    case EventKind::CellEntered: return "CellEntered";
    case EventKind::LocationUpdated: return "LocationUpdated";
    case EventKind::SearchPerformed: return "SearchPerformed";
    case EventKind::LinkEstablished: return "LinkEstablished";
    case EventKind::HandshakeCompleted: return "HandshakeCompleted";
    case EventKind::MessageDelivered: return "MessageDelivered";
    case EventKind::LinkLost: return "LinkLost";
  }
  return "?";
}

void validate(const RoomConfig& config) {
  if (!(config.width > 0.0) || !std::isfinite(config.width)) {
    throw ConfigError("room.width", "must be positive");
  }
  if (!(config.height > 0.0) || !std::isfinite(config.height)) {
    throw ConfigError("room.height", "must be positive");
  }
  if (!(config.tick_duration > 0.0) || !std::isfinite(config.tick_duration)) {
    throw ConfigError("room.tick_duration", "must be positive");
  }

  const GridSpec& g = config.grid;
  if (g.rows <= 0) throw ConfigError("grid.rows", "must be a positive integer");
  if (g.cols <= 0) throw ConfigError("grid.cols", "must be a positive integer");
  if (!(g.cell_size > 0.0) || !std::isfinite(g.cell_size)) {
    throw ConfigError("grid.cell_size", "must be positive");
  }
  if (!nearly_equal(g.rows * g.cell_size, config.height)) {
    throw ConfigError("grid.rows", "rows * cell_size must equal room.height");
  }
  if (!nearly_equal(g.cols * g.cell_size, config.width)) {
    throw ConfigError("grid.cols", "cols * cell_size must equal room.width");
  }
  std::size_t i = 0;
  for (const CellId& c : g.reporting) {
    if (c.row < 0 || c.row >= g.rows || c.col < 0 || c.col >= g.cols) {
      throw ConfigError(indexed("reporting_cells", i), "cell outside the grid");
    }
    ++i;
  }

  try {
    config.beam.validate();
  } catch (const DomainError& e) {
    throw ConfigError("optical.beam", e.what());
  }
  try {
    config.receiver.validate();
  } catch (const DomainError& e) {
    throw ConfigError("optical.receiver", e.what());
  }

  const auto& receivers = config.ultrasonic_receivers;
  if (receivers.size() < 3 ||
      best_triple(receivers).second < pos::kCollinearAreaThreshold) {
    throw ConfigError("ultrasonic.receivers", "at least 3 non-collinear receivers are required");
  }
  std::set<std::string> receiver_ids;
  for (std::size_t r = 0; r < receivers.size(); ++r) {
    if (!is_finite(receivers[r].position)) {
      throw ConfigError(indexed("ultrasonic.receivers", r, "position"), "must be finite");
    }
    if (!receiver_ids.insert(receivers[r].receiver_id).second) {
      throw ConfigError(indexed("ultrasonic.receivers", r, "id"), "duplicate receiver id");
    }
  }
  if (!(config.speed_of_sound > 0.0) || !std::isfinite(config.speed_of_sound)) {
    throw ConfigError("ultrasonic.speed_of_sound", "must be positive");
  }
  if (!(config.tof_noise_sigma >= 0.0) || !std::isfinite(config.tof_noise_sigma)) {
    throw ConfigError("noise.tof_sigma", "must be non-negative");
  }

  std::set<std::string> node_ids;
  for (std::size_t n = 0; n < config.nodes.size(); ++n) {
    const MobileNode& node = config.nodes[n];
    if (node.node_id.empty()) throw ConfigError(indexed("nodes", n, "id"), "must not be empty");
    if (!node_ids.insert(node.node_id).second) {
      throw ConfigError(indexed("nodes", n, "id"), "duplicate node id");
    }
    if (!inside(node.position, config.width, config.height)) {
      throw ConfigError(indexed("nodes", n, "start"), "position outside the room");
    }
    for (std::size_t w = 0; w < node.waypoints.size(); ++w) {
      if (!inside(node.waypoints[w], config.width, config.height)) {
        throw ConfigError(indexed("nodes", n, "waypoints") + "[" + std::to_string(w) + "]",
                          "waypoint outside the room");
      }
    }
    if (!(node.speed >= 0.0) || !std::isfinite(node.speed)) {
      throw ConfigError(indexed("nodes", n, "speed"), "must be non-negative");
    }
    if (node.speed * config.tick_duration > g.cell_size) {
      throw ConfigError(indexed("nodes", n, "speed"),
                        "per-tick displacement exceeds one cell (speed * tick_duration > "
                        "cell_size)");
    }
    if (node.password.empty()) {
      throw ConfigError(indexed("nodes", n, "password"), "must not be empty");
    }
  }
}

void validate_requests(const RoomConfig& config, std::span<const DataRequest> requests) {
  auto known = [&](const std::string& id) {
    return std::any_of(config.nodes.begin(), config.nodes.end(),
                       [&](const MobileNode& n) { return n.node_id == id; });
  };
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const DataRequest& r = requests[i];
    if (r.tick < 1) throw ConfigError(indexed("requests", i, "tick"), "must be >= 1");
    if (!known(r.src)) throw ConfigError(indexed("requests", i, "src"), "unknown node");
    if (!known(r.dst)) throw ConfigError(indexed("requests", i, "dst"), "unknown node");
    if (r.src == r.dst) throw ConfigError(indexed("requests", i, "dst"), "must differ from src");
  }
}

coverage::GaussianBeam default_beam(double cell_size, const coverage::ReceiverSpec& receiver) {
  const double circumradius = std::hypot(cell_size / 2, cell_size / 2);
  const double w = coverage::optimal_beam_radius(circumradius);
  coverage::GaussianBeam beam{coverage::required_launch_power(receiver.sensitivity, w, circumradius),
                              w};
  // Rounding may leave the corner a few ulps short of the threshold.
  while (!coverage::is_connected(beam, receiver, circumradius)) {
    beam.launch_power = std::nextafter(beam.launch_power, INFINITY);
  }
  return beam;
}

kp::Bytes apply_keystream(const kp::BigInt& key, std::span<const std::uint8_t> data) {
  const kp::Bytes key_bytes = kp::to_bytes(key);
  kp::Bytes block_input(key_bytes);
  block_input.resize(key_bytes.size() + 8);
  kp::Bytes out(data.begin(), data.end());
  for (std::size_t offset = 0, counter = 0; offset < out.size(); offset += 32, ++counter) {
    for (int b = 0; b < 8; ++b) {
      block_input[key_bytes.size() + b] = static_cast<std::uint8_t>(counter >> (56 - 8 * b));
    }
    const auto block = kp::sha256(block_input);
    for (std::size_t j = 0; j < 32 && offset + j < out.size(); ++j) out[offset + j] ^= block[j];
  }
  return out;
}

World::World(RoomConfig config)
    : config_(validated(config)),
      grid_(config_.grid.rows, config_.grid.cols, config_.grid.cell_size, config_.grid.reporting,
            config_.grid.adjacency),
      crypto_rng_(mix_seed(config_.rng_seed, kCryptoStream)) {
  const auto [triple, area] = best_triple(config_.ultrasonic_receivers);
  solver_index_ = triple;
  for (std::size_t i = 0; i < 3; ++i) solver_receivers_[i] = config_.ultrasonic_receivers[triple[i]];

  nodes_.reserve(config_.nodes.size());
  for (const MobileNode& spec : config_.nodes) {
    NodeState state;
    state.spec = spec;
    state.position = spec.position;
    state.digest = kp::derive_digest(spec.password, config_.params);
    nodes_.push_back(std::move(state));
  }
}

const NodeState& World::node(std::string_view id) const {
  for (const NodeState& n : nodes_) {
    if (n.spec.node_id == id) return n;
  }
  throw DomainError("unknown node '" + std::string(id) + "'");
}

Point2D World::clamp_to_room(Point2D p) const noexcept {
  return {std::clamp(p.x, 0.0, config_.width), std::clamp(p.y, 0.0, config_.height)};
}

void World::advance(NodeState& node) const {
  double budget = node.spec.speed * config_.tick_duration;
  const auto& waypoints = node.spec.waypoints;
  while (budget > 0.0 && node.next_waypoint < waypoints.size()) {
    const Point2D target = waypoints[node.next_waypoint];
    const double remaining = distance(node.position, target);
    if (remaining <= budget) {
      node.position = target;
      budget -= remaining;
      ++node.next_waypoint;
    } else {
      const double f = budget / remaining;
      node.position = {node.position.x + f * (target.x - node.position.x),
                       node.position.y + f * (target.y - node.position.y)};
      budget = 0.0;
    }
  }
}

std::vector<CellId> World::cells_crossed(const NodeState& node, Point2D to, CellId new_cell) const {
  const CellId start = *node.tracked_cell;
  const Point2D from = *node.last_mapped;
  const double size = grid_.cell_size();

  // (t, is_row_step): each crossing moves one index by one.
  std::vector<std::pair<double, bool>> crossings;
  auto collect = [&](int first, int last, double p0, double p1, bool row_step) {
    const int dir = last > first ? 1 : -1;
    for (int k = first; k != last; k += dir) {
      const double boundary = (dir > 0 ? k + 1 : k) * size;
      const double t = p1 != p0 ? (boundary - p0) / (p1 - p0) : 0.0;
      crossings.emplace_back(t, row_step);
    }
  };
  collect(start.col, new_cell.col, from.x, to.x, false);
  collect(start.row, new_cell.row, from.y, to.y, true);
  std::stable_sort(crossings.begin(), crossings.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<CellId> path;
  CellId cur = start;
  for (const auto& [t, row_step] : crossings) {
    if (row_step) {
      cur.row += new_cell.row > start.row ? 1 : -1;
    } else {
      cur.col += new_cell.col > start.col ? 1 : -1;
    }
    path.push_back(cur);
  }
  return path;
}

std::vector<SimEvent> World::step() {
  ++tick_;
  std::vector<SimEvent> events;

  for (NodeState& n : nodes_) advance(n);

  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    NodeState& n = nodes_[i];
    const auto ranges =
        pos::simulate_ranging(n.position, config_.ultrasonic_receivers, config_.speed_of_sound,
                              config_.tof_noise_sigma, mix_seed(config_.rng_seed, tick_, i + 1));
    PositionEstimated payload{std::nullopt, n.position, std::nullopt};
    try {
      std::array<double, 3> d{};
      for (std::size_t k = 0; k < 3; ++k) {
        d[k] = pos::tof_to_distance(ranges[solver_index_[k]].tof, config_.speed_of_sound);
      }
      payload.estimate = pos::trilaterate(solver_receivers(), d);
    } catch (const DegenerateConfiguration& e) {
      payload.error = e.what();
    }
    n.estimate = payload.estimate;
    events.push_back({tick_, n.spec.node_id, std::move(payload)});
  }

  std::vector<std::vector<CellId>> entered(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    NodeState& n = nodes_[i];
    if (!n.estimate) continue;  // keep the last known cell
    const Point2D mapped = clamp_to_room(*n.estimate);
    const CellId cell = loc::cell_of(grid_, mapped);
    if (!n.tracked_cell) {
      entered[i].push_back(cell);
    } else if (cell != *n.tracked_cell) {
      entered[i] = cells_crossed(n, mapped, cell);
    }
    n.tracked_cell = cell;
    n.last_mapped = mapped;
    for (const CellId& c : entered[i]) {
      events.push_back({tick_, n.spec.node_id, CellEntered{c, grid_.is_reporting(c)}});
    }
  }

  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const std::string& id = nodes_[i].spec.node_id;
    for (const CellId& c : entered[i]) {
      if (!db_.find(id)) {
        const loc::LocationUpdate u = db_.register_initial(grid_, id, c, tick_);
        events.push_back(
            {tick_, id, LocationUpdated{u.cell, u.previous, db_.find(id)->initial_attach}});
      } else if (auto u = loc::on_move(db_, grid_, id, c, tick_)) {
        events.push_back({tick_, id, LocationUpdated{u->cell, u->previous, false}});
      }
    }
  }

  for (NodeState& n : nodes_) {
    if (!n.tracked_cell) continue;
    const double offset = distance(n.position, grid_.center_of(*n.tracked_cell));
    const bool connected = coverage::is_connected(config_.beam, config_.receiver, offset);
    if (n.connected && !connected) {
      events.push_back({tick_, n.spec.node_id,
                        LinkLost{*n.tracked_cell, offset,
                                 coverage::irradiance_at(config_.beam, offset)}});
    }
    n.connected = connected;
  }
  return events;
}

std::vector<SimEvent> World::request_data(const std::string& src_id, const std::string& dst_id) {
  const NodeState& src = node(src_id);
  const NodeState& dst = node(dst_id);
  std::vector<SimEvent> events;

  const CellId true_cell = loc::cell_of(grid_, clamp_to_room(dst.position));
  SearchPerformed search;
  search.requester = src_id;
  if (const auto* record = db_.find(dst_id)) {
    search.last_reported = record->cell;
    search.vicinity_size = loc::search_order(grid_, record->cell).size();
  } else {
    search.vicinity_size = static_cast<std::size_t>(grid_.cell_count());
  }
  try {
    auto result = loc::locate(db_, grid_, dst_id, [&](CellId c) { return c == true_cell; });
    search.found = result.found;
    search.probed = std::move(result.probed);
  } catch (const loc::SearchMiss& miss) {
    search.probed = miss.probed();
    events.push_back({tick_, dst_id, std::move(search)});
    return events;
  }
  const CellId found = *search.found;
  events.push_back({tick_, dst_id, std::move(search)});

  const double offset = distance(dst.position, grid_.center_of(found));
  const double irradiance = coverage::irradiance_at(config_.beam, offset);
  if (!coverage::is_connected(config_.beam, config_.receiver, offset)) {
    events.push_back({tick_, dst_id, LinkLost{found, offset, irradiance}});
    return events;
  }
  events.push_back({tick_, dst_id,
                    LinkEstablished{found, offset, irradiance,
                                    coverage::received_power(config_.beam, config_.receiver,
                                                             offset)}});

  // Both halves of the exchange cross the backend as length-prefixed frames.
  const kp::BigInt a = kp::sample_exponent(config_.params, crypto_rng_);
  const kp::BigInt b = kp::sample_exponent(config_.params, crypto_rng_);
  kp::HandshakeSession initiator(kp::Role::Initiator, config_.params, src.digest, a);
  kp::HandshakeSession responder(kp::Role::Responder, config_.params, dst.digest, b);
  std::deque<kp::Bytes> backend;
  std::size_t transcript_bytes = 0;

  backend.push_back(kp::encode_message(initiator.make_public_value()));
  transcript_bytes += backend.back().size();
  std::size_t offset_in = 0;
  const kp::BigInt k1 = kp::decode_message(backend.front(), offset_in);
  backend.pop_front();

  backend.push_back(kp::encode_message(responder.make_public_value()));
  transcript_bytes += backend.back().size();
  const kp::BigInt key_responder = responder.derive_shared_key(k1);
  offset_in = 0;
  const kp::BigInt k2 = kp::decode_message(backend.front(), offset_in);
  backend.pop_front();
  const kp::BigInt key_initiator = initiator.derive_shared_key(k2);

  HandshakeCompleted done{dst_id, kp::key_fingerprint(key_initiator),
                          kp::key_fingerprint(key_responder), transcript_bytes, false};
  done.keys_match = done.fingerprint_initiator == done.fingerprint_responder;
  const bool match = done.keys_match;
  events.push_back({tick_, src_id, std::move(done)});
  if (!match) return events;

  const std::string text = "tick " + std::to_string(tick_) + " " + src_id + "->" + dst_id;
  const std::span plaintext(reinterpret_cast<const std::uint8_t*>(text.data()), text.size());
  const kp::Bytes ciphertext = apply_keystream(key_initiator, plaintext);
  const kp::Bytes recovered = apply_keystream(key_responder, ciphertext);
  const auto ct_hash = kp::sha256(ciphertext);
  events.push_back({tick_, dst_id,
                    MessageDelivered{src_id, ciphertext.size(),
                                     kp::to_hex(std::span(ct_hash).first(8)),
                                     std::equal(recovered.begin(), recovered.end(),
                                                plaintext.begin(), plaintext.end())}});
  return events;
}

std::vector<SimEvent> run(RoomConfig config, std::int64_t ticks,
                          std::span<const DataRequest> requests) {
  if (ticks < 0) throw DomainError("ticks must be >= 0");
  validate_requests(config, requests);
  World world(std::move(config));
  std::vector<SimEvent> trace;
  for (std::int64_t t = 1; t <= ticks; ++t) {
    auto events = world.step();
    std::move(events.begin(), events.end(), std::back_inserter(trace));
    for (const DataRequest& r : requests) {
      if (r.tick != t) continue;
      auto req = world.request_data(r.src, r.dst);
      std::move(req.begin(), req.end(), std::back_inserter(trace));
    }
  }
  return trace;
}

}  // namespace nlos::sim
