#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "fieldnav/core/geometry.hpp"
#include "fieldnav/core/random.hpp"
#include "fieldnav/simworld/world.hpp"

namespace fieldnav {

struct LidarConfig {
  int beams{360};
  double angle_increment{kPi / 180.0};
  double range_max{10.0};
  double range_sigma{0.01};
  double range_min{1e-3};

  /// Beams are centred on the forward axis, so beam i and beam (beams-1-i) are mirror images.
  [[nodiscard]] double angle_min() const { return -0.5 * (beams - 1) * angle_increment; }
};

struct LaserScan {
  double angle_min{0.0};
  double angle_increment{0.0};
  double range_max{0.0};
  std::vector<double> ranges;  ///< range_max means "no return"
  Pose pose_stamp{};
  std::uint64_t seq{0};

  [[nodiscard]] double beam_angle(std::size_t i) const { return angle_min + static_cast<double>(i) * angle_increment; }
  [[nodiscard]] bool is_return(std::size_t i) const { return ranges[i] < range_max; }
};

class SimulationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Distance from `origin` along `angle` to the first obstacle cell boundary, or range_max.
double cast_ray(const World& world, const Point2& origin, double angle, double range_max);

/// Ray-marches every beam through the grid and adds Gaussian range noise. Throws SimulationError
/// when the pose sits inside an obstacle cell.
LaserScan simulate_scan(const World& world, const Pose& pose, const LidarConfig& config, Rng& rng,
                        std::uint64_t seq = 0);

/// True iff some obstacle cell intersects the closed disc of `radius` around the pose.
bool collision_check(const World& world, const Pose& pose, double radius);

}  // namespace fieldnav
