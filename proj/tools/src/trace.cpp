#include "nlos/cli/trace.hpp"

#include <cstdio>
#include <cstdlib>

#include "json.hpp"

namespace nlos::cli {

using Json = nlohmann::ordered_json;

namespace {

// Rounds to 12 significant digits so traces do not depend on last-ulp
// differences between math libraries.
double real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

Json cell(const location::CellId& c) { return Json::array({c.row, c.col}); }

Json point(const Point2D& p) { return Json::array({real(p.x), real(p.y)}); }

template <class T, class F>
Json optional_json(const std::optional<T>& v, F&& f) {
  return v ? f(*v) : Json(nullptr);
}

Json payload_json(const sim::PositionEstimated& e) {
  Json j;
  j["estimate"] = optional_json(e.estimate, point);
  j["true"] = point(e.truth);
  if (e.error) j["error"] = *e.error;
  return j;
}

Json payload_json(const sim::CellEntered& e) {
  return Json{{"cell", cell(e.cell)}, {"reporting", e.reporting}};
}

Json payload_json(const sim::LocationUpdated& e) {
  return Json{{"cell", cell(e.cell)},
              {"previous", optional_json(e.previous, cell)},
              {"initial_attach", e.initial_attach}};
}

Json payload_json(const sim::SearchPerformed& e) {
  Json probed = Json::array();
  for (const auto& c : e.probed) probed.push_back(cell(c));
  return Json{{"requester", e.requester},
              {"last_reported", optional_json(e.last_reported, cell)},
              {"vicinity_size", e.vicinity_size},
              {"probed", std::move(probed)},
              {"found", optional_json(e.found, cell)},
              {"miss", !e.found.has_value()}};
}

Json payload_json(const sim::LinkEstablished& e) {
  Json j{{"cell", cell(e.cell)}, {"offset", real(e.offset)}, {"irradiance", real(e.irradiance)}};
  if (e.received_power) j["received_power"] = real(*e.received_power);
  return j;
}

Json payload_json(const sim::HandshakeCompleted& e) {
  return Json{{"peer", e.peer},
              {"fingerprint_initiator", e.fingerprint_initiator},
              {"fingerprint_responder", e.fingerprint_responder},
              {"transcript_bytes", e.transcript_bytes},
              {"keys_match", e.keys_match}};
}

Json payload_json(const sim::MessageDelivered& e) {
  return Json{{"src", e.src},
              {"bytes", e.bytes},
              {"ciphertext_fingerprint", e.ciphertext_fingerprint},
              {"round_trip_match", e.round_trip_match}};
}

Json payload_json(const sim::LinkLost& e) {
  return Json{{"cell", cell(e.cell)}, {"offset", real(e.offset)}, {"irradiance", real(e.irradiance)}};
}

}  // namespace

std::string format_trace(const TraceHeader& header, std::span<const sim::SimEvent> events) {
  std::string out;
  Json head{{"tick", 0},
            {"seq", 0},
            {"kind", "Header"},
            {"payload",
             {{"tool", kToolName},
              {"version", kToolVersion},
              {"config_sha256", header.config_sha256},
              {"seed", header.seed},
              {"ticks", header.ticks},
              {"hash", "sha256"},
              {"modulus_bits", header.modulus_bits}}}};
  out += head.dump();
  out += '\n';

  std::int64_t tick = -1;
  std::int64_t seq = 0;
  for (const sim::SimEvent& e : events) {
    if (e.tick != tick) {
      tick = e.tick;
      seq = 0;
    }
    Json line{{"tick", e.tick}, {"seq", seq++}, {"kind", sim::to_string(e.kind())}};
    line["node"] = e.node.empty() ? Json(nullptr) : Json(e.node);
    line["payload"] = std::visit([](const auto& p) { return payload_json(p); }, e.payload);
    out += line.dump();
    out += '\n';
  }
  return out;
}

}  // namespace nlos::cli
