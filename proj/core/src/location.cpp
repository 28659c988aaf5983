#include "nlos/location.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlos/errors.hpp"

namespace nlos::location {

namespace {

std::string describe(CellId c) {
  return "(" + std::to_string(c.row) + "," + std::to_string(c.col) + ")";
}

}  // namespace

CellGrid::CellGrid(int rows, int cols, double cell_size, std::set<CellId> reporting,
                   Adjacency adjacency)
    : rows_(rows), cols_(cols), cell_size_(cell_size), reporting_(std::move(reporting)),
      adjacency_(adjacency) {
  if (rows_ <= 0 || cols_ <= 0) throw DomainError("grid dimensions must be positive");
  if (!(cell_size_ > 0.0) || !std::isfinite(cell_size_)) {
    throw DomainError("cell size must be positive");
  }
  for (const CellId& c : reporting_) {
    if (!contains(c)) throw RangeError("reporting cell " + describe(c) + " is outside the grid");
  }
}

bool CellGrid::contains(CellId c) const noexcept {
  return c.row >= 0 && c.row < rows_ && c.col >= 0 && c.col < cols_;
}

void CellGrid::require(CellId c) const {
  if (!contains(c)) throw RangeError("cell " + describe(c) + " is outside the grid");
}

bool CellGrid::is_reporting(CellId c) const {
  require(c);
  return reporting_.contains(c);
}

Point2D CellGrid::center_of(CellId c) const {
  require(c);
  return {(c.col + 0.5) * cell_size_, (c.row + 0.5) * cell_size_};
}

std::vector<CellId> CellGrid::neighbors(CellId c) const {
  require(c);
  std::vector<CellId> out;
  for (int dr = -1; dr <= 1; ++dr) {
    for (int dc = -1; dc <= 1; ++dc) {
      if (dr == 0 && dc == 0) continue;
      if (adjacency_ == Adjacency::Four && dr != 0 && dc != 0) continue;
      const CellId n{c.row + dr, c.col + dc};
      if (contains(n)) out.push_back(n);
    }
  }
  return out;
}

std::vector<CellId> CellGrid::all_cells() const {
  std::vector<CellId> out;
  out.reserve(static_cast<std::size_t>(cell_count()));
  for (int r = 0; r < rows_; ++r) {
    for (int c = 0; c < cols_; ++c) out.push_back({r, c});
  }
  return out;
}

CellId cell_of(const CellGrid& grid, Point2D position) {
  const double width = grid.cols() * grid.cell_size();
  const double height = grid.rows() * grid.cell_size();
  if (!is_finite(position) || position.x < 0.0 || position.y < 0.0 || position.x > width ||
      position.y > height) {
    throw RangeError("position outside the grid");
  }
  const int row = std::min(static_cast<int>(std::floor(position.y / grid.cell_size())),
                           grid.rows() - 1);
  const int col = std::min(static_cast<int>(std::floor(position.x / grid.cell_size())),
                           grid.cols() - 1);
  return {row, col};
}

std::vector<CellId> search_order(const CellGrid& grid, CellId start) {
  grid.require(start);
  std::vector<char> seen(static_cast<std::size_t>(grid.cell_count()), 0);
  auto mark = [&](CellId c) -> char& {
    return seen[static_cast<std::size_t>(c.row) * grid.cols() + c.col];
  };
  mark(start) = 1;
  std::vector<CellId> order{start};
  std::vector<CellId> frontier{start};
  std::vector<CellId> next;
  while (!frontier.empty()) {
    next.clear();
    for (const CellId& c : frontier) {
      for (const CellId& n : grid.neighbors(c)) {
        if (mark(n) || grid.is_reporting(n)) continue;
        mark(n) = 1;
        next.push_back(n);
      }
    }
    std::sort(next.begin(), next.end());  // each level comes out row-major
    order.insert(order.end(), next.begin(), next.end());
    frontier.swap(next);
  }
  return order;
}

std::set<CellId> vicinity(const CellGrid& grid, CellId c) {
  const auto order = search_order(grid, c);
  return {order.begin(), order.end()};
}

const LocationRecord* LocationDB::find(const std::string& node) const {
  const auto it = records_.find(node);
  return it == records_.end() ? nullptr : &it->second;
}

LocationUpdate LocationDB::register_initial(const CellGrid& grid, const std::string& node,
                                            CellId cell, std::int64_t tick) {
  const bool reporting = grid.is_reporting(cell);
  std::optional<CellId> previous;
  if (const auto* existing = find(node)) previous = existing->cell;
  records_[node] = LocationRecord{cell, tick, !reporting};
  return LocationUpdate{node, cell, previous, tick};
}

std::optional<LocationUpdate> on_move(LocationDB& db, const CellGrid& grid,
                                      const std::string& node, CellId new_cell,
                                      std::int64_t tick) {
  if (!grid.is_reporting(new_cell)) return std::nullopt;
  auto it = db.records_.find(node);
  std::optional<CellId> previous;
  if (it != db.records_.end()) {
    if (it->second.cell == new_cell) return std::nullopt;
    previous = it->second.cell;
  }
  db.records_[node] = LocationRecord{new_cell, tick, false};
  return LocationUpdate{node, new_cell, previous, tick};
}

SearchMiss::SearchMiss(std::string node, std::vector<CellId> probed)
    : std::runtime_error("search miss: node '" + node + "' not found"),
      node_(std::move(node)),
      probed_(std::move(probed)) {}

LocateResult locate(const LocationDB& db, const CellGrid& grid, const std::string& node,
                    const ProbeFn& is_present) {
  const LocationRecord* record = db.find(node);
  const std::vector<CellId> candidates =
      record ? search_order(grid, record->cell) : grid.all_cells();
  std::vector<CellId> probed;
  for (const CellId& c : candidates) {
    probed.push_back(c);
    if (is_present(c)) return LocateResult{c, std::move(probed)};
  }
  throw SearchMiss(node, std::move(probed));
}

}  // namespace nlos::location
