#include "fieldnav/simworld/lidar.hpp"

#include <algorithm>
#include <cmath>

#include "fieldnav/core/grid_traversal.hpp"

namespace fieldnav {

double cast_ray(const World& world, const Point2& origin, double angle, double range_max) {
  const Point2 end{origin.x + range_max * std::cos(angle), origin.y + range_max * std::sin(angle)};
  double range = range_max;
  traverse_segment(world.geometry(), origin, end, [&](const Cell& cell, double t_enter) {
    if (world.kind(cell) == CellKind::kObstacle) {
      range = std::min(range_max, t_enter * range_max);
      return false;
    }
    return true;
  });
  return range;
}

LaserScan simulate_scan(const World& world, const Pose& pose, const LidarConfig& config, Rng& rng,
                        std::uint64_t seq) {
  if (world.is_obstacle(world.geometry().cell_of(pose.position()))) {
    throw SimulationError("lidar pose lies inside an obstacle cell");
  }
  LaserScan scan;
  scan.angle_min = config.angle_min();
  scan.angle_increment = config.angle_increment;
  scan.range_max = config.range_max;
  scan.pose_stamp = pose;
  scan.seq = seq;
  scan.ranges.resize(static_cast<std::size_t>(config.beams));

  std::normal_distribution<double> noise{0.0, 1.0};
  for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
    const double angle = pose.yaw + scan.beam_angle(i);
    double range = cast_ray(world, pose.position(), angle, config.range_max);
    if (range < config.range_max && config.range_sigma > 0.0) {
      range += config.range_sigma * noise(rng);
      range = std::clamp(range, config.range_min, config.range_max);
    }
    scan.ranges[i] = range;
  }
  return scan;
}

bool collision_check(const World& world, const Pose& pose, double radius) {
  const GridGeometry& g = world.geometry();
  const double res = g.resolution;
  const Cell lo = g.cell_of({pose.x - radius, pose.y - radius});
  const Cell hi = g.cell_of({pose.x + radius, pose.y + radius});
  for (int y = std::max(lo.y, 0); y <= std::min(hi.y, g.height - 1); ++y) {
    for (int x = std::max(lo.x, 0); x <= std::min(hi.x, g.width - 1); ++x) {
      if (world.kind({x, y}) != CellKind::kObstacle) {
        continue;
      }
      const double x0 = g.origin.x + x * res;
      const double y0 = g.origin.y + y * res;
      const double dx = pose.x - std::clamp(pose.x, x0, x0 + res);
      const double dy = pose.y - std::clamp(pose.y, y0, y0 + res);
      if (dx * dx + dy * dy <= radius * radius) {
        return true;
      }
    }
  }
  return false;
}

}  // namespace fieldnav
