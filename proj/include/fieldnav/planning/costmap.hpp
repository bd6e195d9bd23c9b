#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fieldnav/core/grid.hpp"
#include "fieldnav/mapping/occupancy_grid.hpp"

namespace fieldnav {

inline constexpr std::uint8_t kLethalCost = 255;
inline constexpr std::uint8_t kInscribedCost = 254;

struct InflationConfig {
  double robot_radius{0.3};
  double decay_radius{1.0};
  /// Navigation treats unknown space as lethal; exploration goal scoring does not.
  bool unknown_is_lethal{true};
};

class Costmap {
 public:
  Costmap() = default;
  Costmap(const GridGeometry& geometry, std::vector<std::uint8_t> cost);

  [[nodiscard]] const GridGeometry& geometry() const { return geometry_; }
  [[nodiscard]] std::uint8_t cost(const Cell& c) const { return cost_[geometry_.index(c)]; }
  [[nodiscard]] std::uint8_t cost(std::size_t index) const { return cost_[index]; }
  [[nodiscard]] std::span<const std::uint8_t> costs() const { return cost_; }

  /// Inside the grid and below the inscribed cost.
  [[nodiscard]] bool traversable(const Cell& c) const {
    return geometry_.contains(c) && cost(c) < kInscribedCost;
  }

  friend bool operator==(const Costmap&, const Costmap&) = default;

 private:
  GridGeometry geometry_{};
  std::vector<std::uint8_t> cost_;
};

/// Cost of a cell whose centre lies `distance` meters from the nearest lethal cell centre.
std::uint8_t inflation_cost(double distance, double robot_radius, double decay_radius);

/// Inflates an explicit lethal mask (nonzero = lethal) using the exact distance transform.
Costmap inflate_mask(const GridGeometry& geometry, std::span<const std::uint8_t> lethal, double robot_radius,
                     double decay_radius);

/// Occupied cells (and Unknown ones when configured) are lethal sources.
Costmap inflate(const OccupancyGrid& grid, const InflationConfig& config, const OccupancyThresholds& thresholds = {});

/// Nearest cell (by centre distance, then index) within `radius` meters whose cost is below the
/// inscribed level; the cell itself when it already qualifies.
std::optional<Cell> nearest_traversable(const Costmap& costmap, const Cell& around, double radius);

}  // namespace fieldnav
