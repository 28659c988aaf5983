#pragma once

#include <functional>
#include <random>
#include <set>
#include <vector>

#include "nlos/location.hpp"

// Reference implementations for location-management tests. They use their
// own neighbour enumeration and recursion, not the library's BFS.
namespace nlos::testing {

inline std::set<location::CellId> flood_fill_oracle(int rows, int cols, bool eight,
                                                    const std::set<location::CellId>& reporting,
                                                    location::CellId start) {
  std::set<location::CellId> out;
  std::function<void(location::CellId)> visit = [&](location::CellId c) {
    if (c.row < 0 || c.col < 0 || c.row >= rows || c.col >= cols) return;
    if (out.contains(c)) return;
    if (!(c == start) && reporting.contains(c)) return;
    out.insert(c);
    const int dr[] = {1, -1, 0, 0, 1, 1, -1, -1};
    const int dc[] = {0, 0, 1, -1, 1, -1, 1, -1};
    for (int k = 0; k < (eight ? 8 : 4); ++k) visit({c.row + dr[k], c.col + dc[k]});
  };
  visit(start);
  return out;
}

/// Row-major scan of every cell; returns the first present.
inline std::optional<location::CellId> full_scan_oracle(
    int rows, int cols, const std::function<bool(location::CellId)>& present) {
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      if (present({r, c})) return location::CellId{r, c};
  return std::nullopt;
}

}  // namespace nlos::testing
