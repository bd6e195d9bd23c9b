#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fieldnav/planning/costmap.hpp"

namespace fieldnav {

/// Exact path cost held as (straight + sqrt(2) * diagonal) / 128.
///
/// A step onto a cell of cost c adds 128 + c to the straight or diagonal part, i.e. the move length
/// times (1 + c/128). Keeping the two irrational parts apart makes cost comparisons exact, so
/// equal-cost paths compare equal no matter the order in which they were summed.
struct PathCost {
  std::int64_t straight{0};
  std::int64_t diagonal{0};

  [[nodiscard]] double value() const;

  friend PathCost operator+(const PathCost& a, const PathCost& b) {
    return {a.straight + b.straight, a.diagonal + b.diagonal};
  }
  friend bool operator==(const PathCost& a, const PathCost& b) { return (a <=> b) == 0; }
  friend std::strong_ordering operator<=>(const PathCost& a, const PathCost& b);
};

/// Cost of one 8-connected move onto a cell of cost `target_cost`.
PathCost step_cost(bool diagonal, std::uint8_t target_cost);

/// Octile distance between two cells at the minimum multiplier of 1.
PathCost octile_distance(const Cell& a, const Cell& b);

struct Path {
  std::vector<Cell> cells;
  std::vector<Point2> points;  ///< cell centres
  PathCost cost{};

  [[nodiscard]] double total_cost() const { return cost.value(); }
  [[nodiscard]] bool empty() const { return cells.empty(); }
};

enum class PlanStatus { kOk, kNoPath, kInvalidEndpoint };

struct PlanResult {
  PlanStatus status{PlanStatus::kNoPath};
  Path path;
};

/// 8-connected A* with the octile heuristic; open-list ties broken by (f, h, cell index).
PlanResult plan_astar(const Costmap& costmap, const Cell& start, const Cell& goal);

/// Minimum path cost from `start` to every cell (nullopt where unreachable), same move model as A*.
std::vector<std::optional<PathCost>> cost_to_reach(const Costmap& costmap, const Cell& start);

/// "x,y" polyline rows, one per waypoint, with a header line.
std::string path_csv(const Path& path);

}  // namespace fieldnav
