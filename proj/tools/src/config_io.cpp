#include "nlos/cli/config_io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "json.hpp"
#include "nlos/errors.hpp"

namespace nlos::cli {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string at_index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

void reject_unknown(const json& obj, const std::string& path,
                    std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* key : allowed) ok = ok || item.key() == key;
    if (!ok) throw ConfigError(join(path, item.key()), "unknown field");
  }
}

const json& require_object(const json& parent, const std::string& key, const std::string& path) {
  const std::string field = join(path, key);
  if (!parent.contains(key)) throw ConfigError(field, "missing required section");
  const json& j = parent.at(key);
  if (!j.is_object()) throw ConfigError(field, "must be an object");
  return j;
}

double as_number(const json& j, const std::string& field) {
  if (!j.is_number()) throw ConfigError(field, "must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(field, "must be finite");
  return v;
}

double number(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.contains(key)) throw ConfigError(join(path, key), "missing required field");
  return as_number(obj.at(key), join(path, key));
}

std::optional<double> optional_number(const json& obj, const std::string& key,
                                      const std::string& path) {
  if (!obj.contains(key)) return std::nullopt;
  return as_number(obj.at(key), join(path, key));
}

std::int64_t integer(const json& j, const std::string& field) {
  if (!j.is_number_integer()) throw ConfigError(field, "must be an integer");
  return j.get<std::int64_t>();
}

std::string string(const json& obj, const std::string& key, const std::string& path) {
  const std::string field = join(path, key);
  if (!obj.contains(key)) throw ConfigError(field, "missing required field");
  if (!obj.at(key).is_string()) throw ConfigError(field, "must be a string");
  return obj.at(key).get<std::string>();
}

Point2D point(const json& j, const std::string& field) {
  if (j.is_array() && j.size() == 2) {
    return {as_number(j[0], at_index(field, 0)), as_number(j[1], at_index(field, 1))};
  }
  if (j.is_object()) {
    reject_unknown(j, field, {"x", "y"});
    return {number(j, "x", field), number(j, "y", field)};
  }
  throw ConfigError(field, "must be [x, y] or {\"x\": .., \"y\": ..}");
}

const json& array(const json& obj, const std::string& key, const std::string& path) {
  const std::string field = join(path, key);
  if (!obj.contains(key)) throw ConfigError(field, "missing required field");
  if (!obj.at(key).is_array()) throw ConfigError(field, "must be an array");
  return obj.at(key);
}

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string(what) + " is not valid JSON: " + e.what());
  }
}

keyagree::PublicParams parse_crypto(const json& root) {
  const json& c = require_object(root, "crypto", "");
  reject_unknown(c, "crypto", {"group", "n", "g"});
  try {
    if (c.contains("group")) {
      if (c.contains("n") || c.contains("g")) {
        throw ConfigError("crypto.group", "give either a named group or n and g, not both");
      }
      const std::string group = string(c, "group", "crypto");
      if (group != "modp2048") throw ConfigError("crypto.group", "unknown group '" + group + "'");
      return keyagree::PublicParams::modp2048();
    }
    auto read = [&](const char* key) {
      const std::string field = join("crypto", key);
      if (!c.contains(key)) throw ConfigError(field, "missing required field");
      const json& v = c.at(key);
      if (v.is_number_unsigned()) return keyagree::BigInt(v.get<std::uint64_t>());
      if (v.is_string()) return parse_integer(v.get<std::string>(), field);
      throw ConfigError(field, "must be an unsigned integer or integer string");
    };
    keyagree::BigInt n = read("n");
    keyagree::BigInt g = read("g");
    try {
      return keyagree::PublicParams(std::move(n), std::move(g));
    } catch (const DomainError& e) {
      throw ConfigError("crypto", e.what());
    }
  } catch (const json::exception& e) {
    throw ConfigError("crypto", e.what());
  }
}

}  // namespace

keyagree::BigInt parse_integer(std::string_view text, const std::string& field) {
  if (text == "modp2048") return keyagree::PublicParams::modp2048().n();
  if (text.empty()) throw ConfigError(field, "empty integer");
  std::string_view digits = text;
  bool hex = false;
  if (digits.size() > 2 && digits[0] == '0' && (digits[1] == 'x' || digits[1] == 'X')) {
    digits.remove_prefix(2);
    hex = true;
  }
  keyagree::BigInt value = 0;
  for (char ch : digits) {
    int d = -1;
    if (ch >= '0' && ch <= '9') d = ch - '0';
    else if (hex && ch >= 'a' && ch <= 'f') d = ch - 'a' + 10;
    else if (hex && ch >= 'A' && ch <= 'F') d = ch - 'A' + 10;
    if (d < 0) throw ConfigError(field, "not a non-negative integer: '" + std::string(text) + "'");
    value = value * (hex ? 16 : 10) + d;
  }
  return value;
}

LoadedConfig parse_config(std::string_view json_text) {
  const json root = parse_json(json_text, "config");
  if (!root.is_object()) throw ConfigError("", "config must be a JSON object");
  reject_unknown(root, "", {"room", "grid", "reporting_cells", "optical", "ultrasonic", "noise",
                            "crypto", "nodes", "seed"});

  sim::RoomConfig cfg;
  cfg.params = parse_crypto(root);

  const json& room = require_object(root, "room", "");
  reject_unknown(room, "room", {"width", "height", "tick_duration"});
  cfg.width = number(room, "width", "room");
  cfg.height = number(room, "height", "room");
  cfg.tick_duration = optional_number(room, "tick_duration", "room").value_or(1.0);

  const json& grid = require_object(root, "grid", "");
  reject_unknown(grid, "grid", {"rows", "cols", "cell_size", "adjacency"});
  if (!grid.contains("rows")) throw ConfigError("grid.rows", "missing required field");
  if (!grid.contains("cols")) throw ConfigError("grid.cols", "missing required field");
  const std::int64_t rows = integer(grid.at("rows"), "grid.rows");
  const std::int64_t cols = integer(grid.at("cols"), "grid.cols");
  if (rows <= 0 || rows > 1'000'000) throw ConfigError("grid.rows", "must be a positive integer");
  if (cols <= 0 || cols > 1'000'000) throw ConfigError("grid.cols", "must be a positive integer");
  cfg.grid.rows = static_cast<int>(rows);
  cfg.grid.cols = static_cast<int>(cols);
  cfg.grid.cell_size = number(grid, "cell_size", "grid");
  if (grid.contains("adjacency")) {
    const std::int64_t adj = integer(grid.at("adjacency"), "grid.adjacency");
    if (adj != 4 && adj != 8) throw ConfigError("grid.adjacency", "must be 4 or 8");
    cfg.grid.adjacency = adj == 8 ? location::Adjacency::Eight : location::Adjacency::Four;
  }

  if (root.contains("reporting_cells")) {
    const json& cells = array(root, "reporting_cells", "");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const std::string field = at_index("reporting_cells", i);
      const json& c = cells[i];
      if (!c.is_array() || c.size() != 2) throw ConfigError(field, "must be [row, col]");
      const std::int64_t r = integer(c[0], field + "[0]");
      const std::int64_t k = integer(c[1], field + "[1]");
      if (r < 0 || r >= rows || k < 0 || k >= cols) {
        throw ConfigError(field, "cell outside the grid");
      }
      if (!cfg.grid.reporting.insert({static_cast<int>(r), static_cast<int>(k)}).second) {
        throw ConfigError(field, "duplicate reporting cell");
      }
    }
  }

  cfg.receiver.sensitivity = 0.01;
  std::optional<double> launch_power;
  std::optional<double> beam_radius;
  if (root.contains("optical")) {
    const json& optical = require_object(root, "optical", "");
    reject_unknown(optical, "optical",
                   {"sensitivity", "detector_area", "launch_power", "beam_radius"});
    cfg.receiver.sensitivity = optional_number(optical, "sensitivity", "optical").value_or(0.01);
    cfg.receiver.detector_area = optional_number(optical, "detector_area", "optical");
    launch_power = optional_number(optical, "launch_power", "optical");
    beam_radius = optional_number(optical, "beam_radius", "optical");
  }
  try {
    cfg.receiver.validate();
    const double circumradius = cfg.grid.cell_size / std::sqrt(2.0);
    if (!launch_power && !beam_radius) {
      cfg.beam = sim::default_beam(cfg.grid.cell_size, cfg.receiver);
    } else {
      cfg.beam.beam_radius = beam_radius ? *beam_radius : coverage::optimal_beam_radius(circumradius);
      cfg.beam.launch_power =
          launch_power ? *launch_power
                       : coverage::required_launch_power(cfg.receiver.sensitivity,
                                                         cfg.beam.beam_radius, circumradius);
    }
  } catch (const DomainError& e) {
    throw ConfigError("optical", e.what());
  }

  const json& us = require_object(root, "ultrasonic", "");
  reject_unknown(us, "ultrasonic", {"speed_of_sound", "receivers"});
  cfg.speed_of_sound =
      optional_number(us, "speed_of_sound", "ultrasonic").value_or(positioning::kDefaultSpeedOfSound);
  const json& receivers = array(us, "receivers", "ultrasonic");
  for (std::size_t i = 0; i < receivers.size(); ++i) {
    const std::string field = at_index("ultrasonic.receivers", i);
    const json& r = receivers[i];
    if (!r.is_object()) throw ConfigError(field, "must be an object");
    reject_unknown(r, field, {"id", "x", "y"});
    cfg.ultrasonic_receivers.push_back(
        {r.contains("id") ? string(r, "id", field) : "u" + std::to_string(i),
         {number(r, "x", field), number(r, "y", field)}});
  }

  if (root.contains("noise")) {
    const json& noise = require_object(root, "noise", "");
    reject_unknown(noise, "noise", {"tof_sigma"});
    cfg.tof_noise_sigma = optional_number(noise, "tof_sigma", "noise").value_or(0.0);
  }

  if (root.contains("seed")) {
    const json& seed = root.at("seed");
    if (!seed.is_number_unsigned()) throw ConfigError("seed", "must be a non-negative integer");
    cfg.rng_seed = seed.get<std::uint64_t>();
  }

  const json& nodes = array(root, "nodes", "");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string field = at_index("nodes", i);
    const json& n = nodes[i];
    if (!n.is_object()) throw ConfigError(field, "must be an object");
    reject_unknown(n, field, {"id", "start", "waypoints", "speed", "password"});
    sim::MobileNode node;
    node.node_id = string(n, "id", field);
    if (!n.contains("start")) throw ConfigError(join(field, "start"), "missing required field");
    node.position = point(n.at("start"), join(field, "start"));
    if (n.contains("waypoints")) {
      const json& wps = array(n, "waypoints", field);
      for (std::size_t w = 0; w < wps.size(); ++w) {
        node.waypoints.push_back(point(wps[w], at_index(join(field, "waypoints"), w)));
      }
    }
    node.speed = optional_number(n, "speed", field).value_or(0.0);
    node.password = string(n, "password", field);
    cfg.nodes.push_back(std::move(node));
  }

  sim::validate(cfg);
  return LoadedConfig{std::move(cfg), root.dump()};
}

std::vector<sim::DataRequest> parse_script(std::string_view json_text) {
  const json root = parse_json(json_text, "script");
  if (!root.is_object()) throw ConfigError("", "script must be a JSON object");
  reject_unknown(root, "", {"requests"});
  std::vector<sim::DataRequest> out;
  if (!root.contains("requests")) return out;
  const json& requests = array(root, "requests", "");
  for (std::size_t i = 0; i < requests.size(); ++i) {
    const std::string field = at_index("requests", i);
    const json& r = requests[i];
    if (!r.is_object()) throw ConfigError(field, "must be an object");
    reject_unknown(r, field, {"tick", "src", "dst"});
    if (!r.contains("tick")) throw ConfigError(join(field, "tick"), "missing required field");
    out.push_back({integer(r.at("tick"), join(field, "tick")), string(r, "src", field),
                   string(r, "dst", field)});
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace nlos::cli
