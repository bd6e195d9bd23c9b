#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fieldnav/mapping/occupancy_grid.hpp"
#include "fieldnav/planning/costmap.hpp"

namespace fieldnav {

struct FrontierCluster {
  std::vector<Cell> cells;  ///< sorted by cell index
  Point2 centroid{};
  int size{0};
  double cost{0.0};  ///< ranking score from the last goal selection (lower is better)
};

/// True iff the cell is Free and has an Unknown 4-neighbour.
bool is_frontier(const GridGeometry& geometry, std::span<const CellClass> classes, const Cell& c);

/// Frontier cells grouped by 8-connectivity; clusters smaller than `min_cluster_size` are dropped.
/// Ordered by size (largest first), then centroid (x, then y).
std::vector<FrontierCluster> find_frontiers(const GridGeometry& geometry, std::span<const CellClass> classes,
                                            int min_cluster_size);
std::vector<FrontierCluster> find_frontiers(const OccupancyGrid& grid, int min_cluster_size,
                                            const OccupancyThresholds& thresholds = {});

/// Frontier goals that keep failing are retired by centroid.
class FrontierBlacklist {
 public:
  explicit FrontierBlacklist(double radius = 0.5, int failures_to_blacklist = 2)
      : radius_(radius), failures_to_blacklist_(failures_to_blacklist) {}

  /// Records one failed attempt on the cluster at `centroid`; returns true once it is blacklisted.
  bool record_failure(const Point2& centroid);
  [[nodiscard]] bool contains(const Point2& centroid) const;
  [[nodiscard]] std::size_t size() const { return blacklisted_.size(); }
  [[nodiscard]] const std::vector<Point2>& entries() const { return blacklisted_; }

 private:
  double radius_;
  int failures_to_blacklist_;
  std::vector<std::pair<Point2, int>> failures_;
  std::vector<Point2> blacklisted_;
};

std::vector<FrontierCluster> without_blacklisted(std::vector<FrontierCluster> clusters,
                                                 const FrontierBlacklist& blacklist);

struct SelectionWeights {
  double distance{1.0};
  double size{0.125};  ///< per cell; half the cell size in meters by default

  static SelectionWeights for_resolution(double resolution) { return {1.0, 0.5 * resolution}; }
};

struct GoalSelection {
  Pose goal{};
  Cell cell{};
  std::size_t cluster{0};
  double path_cost{0.0};  ///< meters-equivalent A* cost
  double score{0.0};
};

/// Ranks clusters by w_dist * path_cost - w_size * size, where path_cost is the planner cost from the
/// pose to the reachable cluster cell nearest the centroid (at most `candidates_per_cluster` cells are
/// tried). The goal faces the centroid. Blacklisted clusters are skipped; nullopt if none is reachable.
/// `costmap` should not treat unknown space as lethal. Updates each cluster's `cost`.
std::optional<GoalSelection> select_goal(std::vector<FrontierCluster>& clusters, const Pose& pose,
                                         const Costmap& costmap, const SelectionWeights& weights,
                                         const FrontierBlacklist& blacklist, int candidates_per_cluster = 3,
                                         double start_search_radius = 0.5);

/// No frontier clusters remain once blacklisted ones are removed.
bool exploration_done(const OccupancyGrid& grid, int min_cluster_size, const FrontierBlacklist& blacklist,
                      const OccupancyThresholds& thresholds = {});

/// "cluster_id,cell_x,cell_y" rows with a header line.
std::string frontiers_csv(const std::vector<FrontierCluster>& clusters);

}  // namespace fieldnav
