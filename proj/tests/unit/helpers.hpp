#pragma once

#include <string>
#include <vector>

#include "fieldnav/core/random.hpp"
#include "fieldnav/mapping/occupancy_grid.hpp"
#include "fieldnav/simworld/world.hpp"

namespace fieldnav::test {

inline std::string data_path(const std::string& relative) { return std::string(FIELDNAV_DATA_DIR) + "/" + relative; }

/// Open world of the given size with a one-cell obstacle border.
inline World boxed_world(int width, int height, double resolution) {
  std::vector<CellKind> cells(static_cast<std::size_t>(width) * height, CellKind::kFree);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (x == 0 || y == 0 || x == width - 1 || y == height - 1) {
        cells[static_cast<std::size_t>(y) * width + x] = CellKind::kObstacle;
      }
    }
  }
  return World({width, height, resolution, {0.0, 0.0}}, std::move(cells));
}

inline World with_obstacle(const World& world, const Cell& c) {
  auto cells = world.cells();
  cells[world.geometry().index(c)] = CellKind::kObstacle;
  return World(world.geometry(), std::move(cells));
}

/// Grid whose cells are Occupied, Free or Unknown with the given probabilities.
inline OccupancyGrid random_grid(int width, int height, double p_occupied, double p_unknown, Rng& rng) {
  OccupancyGrid grid({width, height, 0.25, {0.0, 0.0}});
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double r = u(rng);
      grid.set_logodds({x, y}, r < p_occupied ? 3.0 : (r < p_occupied + p_unknown ? 0.0 : -3.0));
    }
  }
  return grid;
}

}  // namespace fieldnav::test
