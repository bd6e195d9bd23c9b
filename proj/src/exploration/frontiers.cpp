#include "fieldnav/exploration/frontiers.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "fieldnav/planning/astar.hpp"

namespace fieldnav {

bool is_frontier(const GridGeometry& g, std::span<const CellClass> classes, const Cell& c) {
  if (classes[g.index(c)] != CellClass::kFree) {
    return false;
  }
  constexpr std::array<std::array<int, 2>, 4> kNeighbours{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
  for (const auto& [dx, dy] : kNeighbours) {
    const Cell n{c.x + dx, c.y + dy};
    if (g.contains(n) && classes[g.index(n)] == CellClass::kUnknown) {
      return true;
    }
  }
  return false;
}

std::vector<FrontierCluster> find_frontiers(const GridGeometry& g, std::span<const CellClass> classes,
                                            int min_cluster_size) {
  std::vector<std::uint8_t> frontier(g.size(), 0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    frontier[i] = is_frontier(g, classes, g.cell_at(i)) ? 1 : 0;
  }

  std::vector<FrontierCluster> clusters;
  std::vector<std::size_t> stack;
  for (std::size_t seed = 0; seed < g.size(); ++seed) {
    if (frontier[seed] != 1) {
      continue;
    }
    FrontierCluster cluster;
    frontier[seed] = 2;
    stack.push_back(seed);
    while (!stack.empty()) {
      const Cell c = g.cell_at(stack.back());
      stack.pop_back();
      cluster.cells.push_back(c);
      for (int dy = -1; dy <= 1; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const Cell n{c.x + dx, c.y + dy};
          if ((dx != 0 || dy != 0) && g.contains(n) && frontier[g.index(n)] == 1) {
            frontier[g.index(n)] = 2;
            stack.push_back(g.index(n));
          }
        }
      }
    }
    cluster.size = static_cast<int>(cluster.cells.size());
    if (cluster.size < min_cluster_size) {
      continue;
    }
    std::sort(cluster.cells.begin(), cluster.cells.end(),
              [&](const Cell& a, const Cell& b) { return g.index(a) < g.index(b); });
    double sx = 0.0;
    double sy = 0.0;
    for (const Cell& c : cluster.cells) {
      const Point2 p = g.center(c);
      sx += p.x;
      sy += p.y;
    }
    cluster.centroid = {sx / cluster.size, sy / cluster.size};
    clusters.push_back(std::move(cluster));
  }
  std::stable_sort(clusters.begin(), clusters.end(), [](const FrontierCluster& a, const FrontierCluster& b) {
    if (a.size != b.size) {
      return a.size > b.size;
    }
    if (a.centroid.x != b.centroid.x) {
      return a.centroid.x < b.centroid.x;
    }
    return a.centroid.y < b.centroid.y;
  });
  return clusters;
}

std::vector<FrontierCluster> find_frontiers(const OccupancyGrid& grid, int min_cluster_size,
                                            const OccupancyThresholds& thresholds) {
  const auto classes = grid.classify(thresholds);
  return find_frontiers(grid.geometry(), classes, min_cluster_size);
}

bool FrontierBlacklist::record_failure(const Point2& centroid) {
  if (contains(centroid)) {
    return true;
  }
  for (auto& [where, count] : failures_) {
    if (distance(where, centroid) <= radius_) {
      if (++count >= failures_to_blacklist_) {
        blacklisted_.push_back(centroid);
        return true;
      }
      return false;
    }
  }
  failures_.emplace_back(centroid, 1);
  if (failures_to_blacklist_ <= 1) {
    blacklisted_.push_back(centroid);
    return true;
  }
  return false;
}

bool FrontierBlacklist::contains(const Point2& centroid) const {
  return std::any_of(blacklisted_.begin(), blacklisted_.end(),
                     [&](const Point2& p) { return distance(p, centroid) <= radius_; });
}

std::vector<FrontierCluster> without_blacklisted(std::vector<FrontierCluster> clusters,
                                                 const FrontierBlacklist& blacklist) {
  std::erase_if(clusters, [&](const FrontierCluster& c) { return blacklist.contains(c.centroid); });
  return clusters;
}

std::optional<GoalSelection> select_goal(std::vector<FrontierCluster>& clusters, const Pose& pose,
                                         const Costmap& costmap, const SelectionWeights& weights,
                                         const FrontierBlacklist& blacklist, int candidates_per_cluster,
                                         double start_search_radius) {
  const GridGeometry& g = costmap.geometry();
  const auto start = nearest_traversable(costmap, g.cell_of(pose.position()), start_search_radius);
  if (!start) {
    return std::nullopt;
  }
  // One search from the pose prices every cluster candidate at its exact A* cost.
  const auto reach = cost_to_reach(costmap, *start);

  std::optional<GoalSelection> best;
  for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
    FrontierCluster& cluster = clusters[ci];
    cluster.cost = std::numeric_limits<double>::infinity();
    if (blacklist.contains(cluster.centroid)) {
      continue;
    }
    std::vector<Cell> by_centroid = cluster.cells;
    std::stable_sort(by_centroid.begin(), by_centroid.end(), [&](const Cell& a, const Cell& b) {
      return distance(g.center(a), cluster.centroid) < distance(g.center(b), cluster.centroid);
    });
    int tried = 0;
    for (const Cell& c : by_centroid) {
      if (tried >= candidates_per_cluster) {
        break;
      }
      if (!costmap.traversable(c)) {
        continue;
      }
      ++tried;
      const auto& cost = reach[g.index(c)];
      if (!cost) {
        continue;
      }
      const double path_cost = cost->value() * g.resolution;
      const double score = weights.distance * path_cost - weights.size * cluster.size;
      cluster.cost = score;
      if (!best || score < best->score) {
        const Point2 at = g.center(c);
        double yaw = pose.yaw;
        if (distance(at, cluster.centroid) > 1e-9) {
          yaw = std::atan2(cluster.centroid.y - at.y, cluster.centroid.x - at.x);
        }
        best = GoalSelection{{at.x, at.y, normalize_angle(yaw), pose.z}, c, ci, path_cost, score};
      }
      break;
    }
  }
  return best;
}

bool exploration_done(const OccupancyGrid& grid, int min_cluster_size, const FrontierBlacklist& blacklist,
                      const OccupancyThresholds& thresholds) {
  return without_blacklisted(find_frontiers(grid, min_cluster_size, thresholds), blacklist).empty();
}

std::string frontiers_csv(const std::vector<FrontierCluster>& clusters) {
  std::string out = "cluster_id,cell_x,cell_y\n";
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    for (const Cell& c : clusters[i].cells) {
      out += std::to_string(i) + "," + std::to_string(c.x) + "," + std::to_string(c.y) + "\n";
    }
  }
  return out;
}

}  // namespace fieldnav
