#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlos/geometry.hpp"

// Reporting-cell location management over a square cell grid. Nodes report
// their position only when they enter a reporting cell; a paged node is
// searched for in the vicinity of its last report.
namespace nlos::location {

struct CellId {
  int row = 0;
  int col = 0;

  friend auto operator<=>(const CellId&, const CellId&) = default;
};

enum class Adjacency { Four, Eight };

class CellGrid {
 public:
  /// Throws DomainError for non-positive dimensions and RangeError for
  /// reporting cells outside the grid.
  CellGrid(int rows, int cols, double cell_size, std::set<CellId> reporting,
           Adjacency adjacency = Adjacency::Four);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  double cell_size() const noexcept { return cell_size_; }
  Adjacency adjacency() const noexcept { return adjacency_; }
  const std::set<CellId>& reporting() const noexcept { return reporting_; }
  int cell_count() const noexcept { return rows_ * cols_; }

  bool contains(CellId c) const noexcept;
  bool is_reporting(CellId c) const;
  Point2D center_of(CellId c) const;

  /// Valid neighbors of `c` under the grid's adjacency, in row-major order.
  std::vector<CellId> neighbors(CellId c) const;

  /// Every cell, row-major.
  std::vector<CellId> all_cells() const;

  /// Throws RangeError if `c` is not a grid cell.
  void require(CellId c) const;

 private:
  int rows_;
  int cols_;
  double cell_size_;
  std::set<CellId> reporting_;
  Adjacency adjacency_;
};

/// Cell containing `position`. Interior edges belong to the higher-index
/// cell; the top and right room edges belong to the last row/column.
/// Throws RangeError outside the grid.
CellId cell_of(const CellGrid& grid, Point2D position);

/// `c` plus every non-reporting cell reachable from it without passing
/// through another reporting cell.
std::set<CellId> vicinity(const CellGrid& grid, CellId c);

/// The vicinity of `c` in probe order: breadth-first distance from `c`,
/// row-major within one distance.
std::vector<CellId> search_order(const CellGrid& grid, CellId c);

struct LocationRecord {
  CellId cell;
  std::int64_t tick = 0;
  bool initial_attach = false;  ///< registered on first appearance, may be non-reporting
};

struct LocationUpdate {
  std::string node;
  CellId cell;
  std::optional<CellId> previous;
  std::int64_t tick = 0;
};

/// Last-known reporting cell per node. Single writer.
class LocationDB {
 public:
  const LocationRecord* find(const std::string& node) const;
  std::size_t size() const noexcept { return records_.size(); }
  const std::map<std::string, LocationRecord>& records() const noexcept { return records_; }

  /// Mandatory registration on a node's first appearance. A reporting
  /// `cell` is recorded as an ordinary report.
  LocationUpdate register_initial(const CellGrid& grid, const std::string& node, CellId cell,
                                  std::int64_t tick);

 private:
  friend std::optional<LocationUpdate> on_move(LocationDB&, const CellGrid&, const std::string&,
                                               CellId, std::int64_t);
  std::map<std::string, LocationRecord> records_;
};

/// Records `new_cell` if it is a reporting cell other than the node's last
/// recorded cell. Returns the update, or nothing when the database is
/// unchanged.
std::optional<LocationUpdate> on_move(LocationDB& db, const CellGrid& grid,
                                      const std::string& node, CellId new_cell,
                                      std::int64_t tick);

struct LocateResult {
  CellId found;
  std::vector<CellId> probed;
};

/// Answers whether the node is present in a probed cell.
using ProbeFn = std::function<bool(CellId)>;

/// Raised when the node is absent from every searched cell.
class SearchMiss : public std::runtime_error {
 public:
  SearchMiss(std::string node, std::vector<CellId> probed);
  const std::string& node() const noexcept { return node_; }
  const std::vector<CellId>& probed() const noexcept { return probed_; }

 private:
  std::string node_;
  std::vector<CellId> probed_;
};

/// Pages `node`: probes search_order(last recorded cell), or every cell
/// row-major when the node has no record, stopping at the first hit.
LocateResult locate(const LocationDB& db, const CellGrid& grid, const std::string& node,
                    const ProbeFn& is_present);

}  // namespace nlos::location
