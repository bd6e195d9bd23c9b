#include "fieldnav/planning/costmap.hpp"

#include <cmath>
#include <stdexcept>

#include "fieldnav/core/distance_transform.hpp"

namespace fieldnav {

Costmap::Costmap(const GridGeometry& geometry, std::vector<std::uint8_t> cost)
    : geometry_(geometry), cost_(std::move(cost)) {
  if (cost_.size() != geometry_.size()) {
    throw std::invalid_argument("costmap size does not match geometry");
  }
}

std::uint8_t inflation_cost(double distance, double robot_radius, double decay_radius) {
  if (distance == 0.0) {
    return kLethalCost;
  }
  if (distance <= robot_radius) {
    return kInscribedCost;
  }
  const double beyond = distance - robot_radius;
  if (!(beyond < decay_radius)) {
    return 0;
  }
  return static_cast<std::uint8_t>(std::lround(253.0 * std::exp(-3.0 / decay_radius * beyond)));
}

Costmap inflate_mask(const GridGeometry& geometry, std::span<const std::uint8_t> lethal, double robot_radius,
                     double decay_radius) {
  validate(geometry);
  if (!(robot_radius >= 0.0) || !(decay_radius > 0.0)) {
    throw std::invalid_argument("inflation radii must be nonnegative (robot) and positive (decay)");
  }
  const auto squared = squared_distance_transform(geometry.width, geometry.height, lethal);
  std::vector<std::uint8_t> cost(geometry.size(), 0);
  for (std::size_t i = 0; i < cost.size(); ++i) {
    if (std::isfinite(squared[i])) {
      cost[i] = inflation_cost(std::sqrt(squared[i]) * geometry.resolution, robot_radius, decay_radius);
    }
  }
  return {geometry, std::move(cost)};
}

Costmap inflate(const OccupancyGrid& grid, const InflationConfig& config, const OccupancyThresholds& thresholds) {
  const auto classes = grid.classify(thresholds);
  std::vector<std::uint8_t> lethal(classes.size());
  for (std::size_t i = 0; i < classes.size(); ++i) {
    lethal[i] = classes[i] == CellClass::kOccupied || (config.unknown_is_lethal && classes[i] == CellClass::kUnknown);
  }
  return inflate_mask(grid.geometry(), lethal, config.robot_radius, config.decay_radius);
}

std::optional<Cell> nearest_traversable(const Costmap& costmap, const Cell& around, double radius) {
  const GridGeometry& g = costmap.geometry();
  if (costmap.traversable(around)) {
    return around;
  }
  const int reach = static_cast<int>(std::floor(radius / g.resolution));
  const long limit = static_cast<long>(std::floor(radius / g.resolution * radius / g.resolution + 1e-9));
  std::optional<Cell> best;
  long best_d2 = 0;
  for (int dy = -reach; dy <= reach; ++dy) {
    for (int dx = -reach; dx <= reach; ++dx) {
      const long d2 = static_cast<long>(dx) * dx + static_cast<long>(dy) * dy;
      const Cell c{around.x + dx, around.y + dy};
      if (d2 > limit || !costmap.traversable(c)) {
        continue;
      }
      if (!best || d2 < best_d2 || (d2 == best_d2 && g.index(c) < g.index(*best))) {
        best = c;
        best_d2 = d2;
      }
    }
  }
  return best;
}

}  // namespace fieldnav
