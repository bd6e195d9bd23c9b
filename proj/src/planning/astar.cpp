#include "fieldnav/planning/astar.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <queue>
#include <tuple>

#include "fieldnav/core/config_file.hpp"

namespace fieldnav {
namespace {

constexpr std::int64_t kUnit = 128;

constexpr std::array<std::array<int, 2>, 8> kMoves{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};

struct OpenEntry {
  PathCost f;
  PathCost h;
  std::size_t index;
  PathCost g;

  // std::priority_queue pops the greatest element; invert so the smallest key comes first.
  friend bool operator<(const OpenEntry& a, const OpenEntry& b) {
    return std::tie(b.f, b.h, b.index) < std::tie(a.f, a.h, a.index);
  }
};

}  // namespace

double PathCost::value() const {
  return (static_cast<double>(straight) + std::numbers::sqrt2 * static_cast<double>(diagonal)) / kUnit;
}

std::strong_ordering operator<=>(const PathCost& a, const PathCost& b) {
  // Compare da + sqrt(2) * dd against 0 exactly.
  const std::int64_t da = a.straight - b.straight;
  const std::int64_t dd = a.diagonal - b.diagonal;
  if (dd == 0) {
    return da <=> 0;
  }
  if (da == 0) {
    return dd <=> 0;
  }
  if (da > 0 && dd > 0) {
    return std::strong_ordering::greater;
  }
  if (da < 0 && dd < 0) {
    return std::strong_ordering::less;
  }
  // Opposite signs: |da| vs sqrt(2)|dd|, never equal because sqrt(2) is irrational.
  const bool straight_dominates = da * da > 2 * dd * dd;
  if (da > 0) {
    return straight_dominates ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  return straight_dominates ? std::strong_ordering::less : std::strong_ordering::greater;
}

PathCost step_cost(bool diagonal, std::uint8_t target_cost) {
  const std::int64_t weight = kUnit + target_cost;
  return diagonal ? PathCost{0, weight} : PathCost{weight, 0};
}

PathCost octile_distance(const Cell& a, const Cell& b) {
  const std::int64_t dx = std::abs(a.x - b.x);
  const std::int64_t dy = std::abs(a.y - b.y);
  return {kUnit * (std::max(dx, dy) - std::min(dx, dy)), kUnit * std::min(dx, dy)};
}

PlanResult plan_astar(const Costmap& costmap, const Cell& start, const Cell& goal) {
  const GridGeometry& g = costmap.geometry();
  PlanResult result;
  if (!costmap.traversable(start) || !costmap.traversable(goal)) {
    result.status = PlanStatus::kInvalidEndpoint;
    return result;
  }

  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::optional<PathCost>> best(g.size());
  std::vector<std::size_t> parent(g.size(), kNone);
  std::vector<std::uint8_t> closed(g.size(), 0);
  std::priority_queue<OpenEntry> open;

  const std::size_t start_index = g.index(start);
  const std::size_t goal_index = g.index(goal);
  best[start_index] = PathCost{};
  const PathCost h0 = octile_distance(start, goal);
  open.push({h0, h0, start_index, PathCost{}});

  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    if (closed[top.index] != 0 || top.g != *best[top.index]) {
      continue;
    }
    closed[top.index] = 1;
    if (top.index == goal_index) {
      break;
    }
    const Cell here = g.cell_at(top.index);
    for (const auto& [mx, my] : kMoves) {
      const Cell next{here.x + mx, here.y + my};
      if (!costmap.traversable(next)) {
        continue;
      }
      const std::size_t ni = g.index(next);
      if (closed[ni] != 0) {
        continue;
      }
      const PathCost candidate = top.g + step_cost(mx != 0 && my != 0, costmap.cost(ni));
      if (!best[ni] || candidate < *best[ni]) {
        best[ni] = candidate;
        parent[ni] = top.index;
        const PathCost h = octile_distance(next, goal);
        open.push({candidate + h, h, ni, candidate});
      }
    }
  }

  if (closed[goal_index] == 0) {
    result.status = PlanStatus::kNoPath;
    return result;
  }
  result.status = PlanStatus::kOk;
  for (std::size_t i = goal_index; i != kNone; i = parent[i]) {
    result.path.cells.push_back(g.cell_at(i));
  }
  std::reverse(result.path.cells.begin(), result.path.cells.end());
  for (const Cell& c : result.path.cells) {
    result.path.points.push_back(g.center(c));
  }
  result.path.cost = *best[goal_index];
  return result;
}

std::vector<std::optional<PathCost>> cost_to_reach(const Costmap& costmap, const Cell& start) {
  const GridGeometry& g = costmap.geometry();
  std::vector<std::optional<PathCost>> best(g.size());
  if (!costmap.traversable(start)) {
    return best;
  }
  std::vector<std::uint8_t> closed(g.size(), 0);
  std::priority_queue<OpenEntry> open;
  best[g.index(start)] = PathCost{};
  open.push({PathCost{}, PathCost{}, g.index(start), PathCost{}});
  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    if (closed[top.index] != 0) {
      continue;
    }
    closed[top.index] = 1;
    const Cell here = g.cell_at(top.index);
    for (const auto& [mx, my] : kMoves) {
      const Cell next{here.x + mx, here.y + my};
      if (!costmap.traversable(next)) {
        continue;
      }
      const std::size_t ni = g.index(next);
      const PathCost candidate = top.g + step_cost(mx != 0 && my != 0, costmap.cost(ni));
      if (closed[ni] == 0 && (!best[ni] || candidate < *best[ni])) {
        best[ni] = candidate;
        open.push({candidate, PathCost{}, ni, candidate});
      }
    }
  }
  return best;
}

std::string path_csv(const Path& path) {
  std::string out = "x,y\n";
  for (const Point2& p : path.points) {
    out += format_double(p.x) + "," + format_double(p.y) + "\n";
  }
  return out;
}

}  // namespace fieldnav
