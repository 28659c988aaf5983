#include <algorithm>

#include "doctest.h"
#include "location_oracles.hpp"
#include "nlos/errors.hpp"
#include "nlos/simulator.hpp"
#include "sim_fixtures.hpp"

using namespace nlos;
using namespace nlos::sim;
using nlos::location::CellId;
using nlos::testing::small_room;

namespace {

template <class T>
std::vector<const T*> of(const std::vector<SimEvent>& events, const std::string& node = {}) {
  std::vector<const T*> out;
  for (const auto& e : events)
    if (const auto* p = std::get_if<T>(&e.payload); p && (node.empty() || e.node == node))
      out.push_back(p);
  return out;
}

std::vector<SimEvent> run_ticks(World& w, int n) {
  std::vector<SimEvent> all;
  for (int i = 0; i < n; ++i) {
    auto ev = w.step();
    all.insert(all.end(), ev.begin(), ev.end());
  }
  return all;
}

bool same_event(const SimEvent& a, const SimEvent& b) {
  if (a.tick != b.tick || a.node != b.node || a.kind() != b.kind()) return false;
  if (const auto* pa = std::get_if<PositionEstimated>(&a.payload)) {
    const auto& pb = std::get<PositionEstimated>(b.payload);
    return pa->estimate == pb.estimate && pa->truth == pb.truth && pa->error == pb.error;
  }
  if (const auto* pa = std::get_if<HandshakeCompleted>(&a.payload)) {
    const auto& pb = std::get<HandshakeCompleted>(b.payload);
    return pa->fingerprint_initiator == pb.fingerprint_initiator &&
           pa->fingerprint_responder == pb.fingerprint_responder;
  }
  return true;
}

}  // namespace

TEST_CASE("validation rejects bad configurations with field paths") {
  auto expect_field = [](RoomConfig cfg, const std::string& field) {
    try {
      validate(cfg);
      FAIL("expected ConfigError for " << field);
    } catch (const ConfigError& e) {
      CHECK(e.field() == field);
    }
  };
  CHECK_NOTHROW(validate(small_room()));
  {
    auto c = small_room();
    c.width = -1;
    expect_field(c, "room.width");
  }
  {
    auto c = small_room();
    c.grid.rows = 3;
    expect_field(c, "grid.rows");
  }
  {
    auto c = small_room();
    c.ultrasonic_receivers.pop_back();
    expect_field(c, "ultrasonic.receivers");
    try {
      validate(c);
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("at least 3 non-collinear receivers") != std::string::npos);
    }
  }
  {
    auto c = small_room();
    c.ultrasonic_receivers[2].position = {2, 0};
    expect_field(c, "ultrasonic.receivers");
  }
  {
    auto c = small_room();
    c.tof_noise_sigma = -1;
    expect_field(c, "noise.tof_sigma");
  }
  {
    auto c = small_room();
    c.nodes[1].speed = 2.0;
    expect_field(c, "nodes[1].speed");
  }
  {
    auto c = small_room();
    c.nodes[1].waypoints[0] = {9, 9};
    expect_field(c, "nodes[1].waypoints[0]");
  }
  {
    auto c = small_room();
    c.nodes[0].password.clear();
    expect_field(c, "nodes[0].password");
  }
  {
    auto c = small_room();
    c.nodes[1].node_id = "alice";
    expect_field(c, "nodes[1].id");
  }
  {
    auto c = small_room();
    std::vector<DataRequest> reqs{{0, "alice", "bob"}};
    CHECK_THROWS_AS(validate_requests(c, reqs), ConfigError);
    reqs = {{1, "alice", "carol"}};
    CHECK_THROWS_AS(validate_requests(c, reqs), ConfigError);
    reqs = {{1, "alice", "alice"}};
    CHECK_THROWS_AS(validate_requests(c, reqs), ConfigError);
  }
  CHECK_THROWS_AS(run(small_room(), -1, {}), DomainError);
}

TEST_CASE("default beam connects the whole cell") {
  const auto cfg = small_room();
  CHECK(coverage::is_connected(cfg.beam, cfg.receiver, std::hypot(0.5, 0.5)));
  CHECK(cfg.beam.beam_radius == doctest::Approx(1.0));
}

TEST_CASE("stationary node with zero noise repeats its estimate") {
  World w(small_room());
  std::vector<Point2D> est;
  for (int i = 0; i < 10; ++i)
    for (const auto* p : of<PositionEstimated>(w.step(), "alice")) est.push_back(*p->estimate);
  REQUIRE(est.size() == 10);
  for (const auto& p : est) CHECK(p == est.front());
}

TEST_CASE("tracking soundness at zero noise") {
  World w(small_room());
  for (int i = 0; i < 12; ++i) {
    for (const auto* p : of<PositionEstimated>(w.step())) {
      REQUIRE(p->estimate);
      CHECK(distance(*p->estimate, p->truth) < 1e-9);
    }
    for (const auto& n : w.nodes())
      CHECK(*n.tracked_cell == location::cell_of(w.grid(), n.position));
  }
}

TEST_CASE("bob updates exactly once when entering the reporting column") {
  World w(small_room());
  const auto ev = run_ticks(w, 16);
  const auto ups = of<LocationUpdated>(ev, "bob");
  REQUIRE(ups.size() == 2);
  CHECK(ups[0]->initial_attach);
  CHECK(ups[0]->cell == CellId{3, 3});
  CHECK_FALSE(ups[1]->initial_attach);
  CHECK(ups[1]->cell == CellId{3, 1});
  CHECK(ups[1]->previous == CellId{3, 3});
  const auto entered = of<CellEntered>(ev, "bob");
  std::vector<CellId> path;
  for (const auto* c : entered) path.push_back(c->cell);
  CHECK(path == std::vector<CellId>{{3, 3}, {3, 2}, {3, 1}, {3, 0}});
  CHECK(of<LocationUpdated>(ev, "alice").size() == 1);
  CHECK(w.db().find("bob")->cell == CellId{3, 1});
}

TEST_CASE("same seed replays identically, different noise does not") {
  const auto a = run(small_room(1e-6), 20, {});
  const auto b = run(small_room(1e-6), 20, {});
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(same_event(a[i], b[i]));

  const auto c = run(small_room(2e-6), 20, {});
  bool any_diff = a.size() != c.size();
  for (std::size_t i = 0; !any_diff && i < a.size(); ++i) any_diff = !same_event(a[i], c[i]);
  CHECK(any_diff);
}

TEST_CASE("data request end to end") {
  World w(small_room());
  run_ticks(w, 12);
  const auto ev = w.request_data("alice", "bob");
  REQUIRE(ev.size() == 4);
  CHECK(ev[0].kind() == EventKind::SearchPerformed);
  CHECK(ev[1].kind() == EventKind::LinkEstablished);
  CHECK(ev[2].kind() == EventKind::HandshakeCompleted);
  CHECK(ev[3].kind() == EventKind::MessageDelivered);
  const auto& s = std::get<SearchPerformed>(ev[0].payload);
  CHECK(s.last_reported == CellId{3, 1});
  CHECK(s.vicinity_size == nlos::testing::flood_fill_oracle(4, 4, false, w.config().grid.reporting, {3, 1}).size());
  CHECK(s.found == location::cell_of(w.grid(), w.node("bob").position));
  CHECK(s.probed.size() <= s.vicinity_size);
  const auto& h = std::get<HandshakeCompleted>(ev[2].payload);
  CHECK(h.keys_match);
  CHECK(h.fingerprint_initiator == h.fingerprint_responder);
  CHECK(h.peer == "bob");
  CHECK(std::get<MessageDelivered>(ev[3].payload).round_trip_match);
  CHECK(ev[3].node == "bob");
}

TEST_CASE("mismatched passwords stop before delivery") {
  auto cfg = small_room();
  cfg.nodes[1].password = "wrong";
  World w(cfg);
  run_ticks(w, 3);
  const auto ev = w.request_data("alice", "bob");
  const auto hs = of<HandshakeCompleted>(ev);
  REQUIRE(hs.size() == 1);
  CHECK_FALSE(hs[0]->keys_match);
  CHECK(hs[0]->fingerprint_initiator != hs[0]->fingerprint_responder);
  CHECK(of<MessageDelivered>(ev).empty());
}

TEST_CASE("request before any step scans the whole grid") {
  World w(small_room());
  const auto ev = w.request_data("alice", "bob");
  const auto s = of<SearchPerformed>(ev);
  REQUIRE(s.size() == 1);
  CHECK_FALSE(s[0]->last_reported);
  CHECK(s[0]->found == CellId{3, 3});
  CHECK(s[0]->probed.size() == 16);
  CHECK_THROWS_AS(w.request_data("alice", "nobody"), DomainError);
}

TEST_CASE("weak beam loses the link") {
  auto cfg = small_room();
  cfg.beam = {1e-3, 0.3};
  World w(cfg);
  const auto first = w.step();
  CHECK(of<LinkLost>(first).empty());  // never connected, so nothing to lose
  run_ticks(w, 2);
  const auto ev = w.request_data("alice", "bob");
  const auto lost = of<LinkLost>(ev);
  REQUIRE(lost.size() == 1);
  CHECK(of<HandshakeCompleted>(ev).empty());
}

TEST_CASE("link drops when a receiver walks out of its cell coverage") {
  auto cfg = small_room();
  // Beam covers only 0.3 m around each center; moving bob passes through the edges.
  cfg.beam.beam_radius = 0.3;
  cfg.beam.launch_power = coverage::required_launch_power(cfg.receiver.sensitivity, 0.3, 0.3);
  World w(cfg);
  const auto ev = run_ticks(w, 10);
  CHECK_FALSE(of<LinkLost>(ev, "bob").empty());
  CHECK(of<LinkLost>(ev, "alice").empty());
}

TEST_CASE("keystream is an involution") {
  const keyagree::BigInt key("123456789012345678901234567890");
  keyagree::Bytes data(100);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] = static_cast<std::uint8_t>(i * 7);
  const auto enc = apply_keystream(key, data);
  CHECK(enc != data);
  CHECK(apply_keystream(key, enc) == data);
  CHECK(apply_keystream(key + 1, enc) != data);
}

TEST_CASE("mix_seed spreads inputs") {
  CHECK(mix_seed(1, 2, 3) == mix_seed(1, 2, 3));
  CHECK(mix_seed(1, 2, 3) != mix_seed(1, 3, 2));
  CHECK(mix_seed(1, 2) != mix_seed(2, 2));
}
