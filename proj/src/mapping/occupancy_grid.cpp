#include "fieldnav/mapping/occupancy_grid.hpp"

#include <algorithm>

#include "fieldnav/core/grid_traversal.hpp"

namespace fieldnav {

OccupancyGrid::OccupancyGrid(const GridGeometry& geometry)
    : geometry_(geometry), logodds_(geometry.size(), 0.0), observations_(geometry.size(), 0) {
  validate(geometry_);
}

void OccupancyGrid::set_logodds(const Cell& c, double value) {
  logodds_[geometry_.index(c)] = value;
  ++revision_;
}

void OccupancyGrid::update(std::size_t index, double delta, double clamp) {
  logodds_[index] = std::clamp(logodds_[index] + delta, -clamp, clamp);
  ++revision_;
}

CellClass OccupancyGrid::classify(const Cell& c, const OccupancyThresholds& t) const {
  const double v = logodds(c);
  if (v > t.occupied_logodds()) {
    return CellClass::kOccupied;
  }
  return v < t.free_logodds() ? CellClass::kFree : CellClass::kUnknown;
}

std::vector<CellClass> OccupancyGrid::classify(const OccupancyThresholds& t) const {
  std::vector<CellClass> out(logodds_.size());
  kernels::active().classify(logodds_, t.occupied_logodds(), t.free_logodds(), out);
  return out;
}

void integrate_scan(OccupancyGrid& grid, const Pose& pose, const LaserScan& scan, const InverseSensorModel& model) {
  const GridGeometry& g = grid.geometry();
  const Point2 origin = pose.position();
  const auto touch = [&](std::size_t index) {
    if (grid.observations_[index] != UINT16_MAX) {
      ++grid.observations_[index];
    }
  };

  for (std::size_t i = 0; i < scan.ranges.size(); ++i) {
    const bool hit = scan.is_return(i);
    const double angle = pose.yaw + scan.beam_angle(i);
    const double length = hit ? scan.ranges[i] + model.hit_extension * g.resolution : scan.range_max;
    const Point2 end{origin.x + length * std::cos(angle), origin.y + length * std::sin(angle)};
    const Cell end_cell = g.cell_of(end);

    traverse_segment(g, origin, end, [&](const Cell& cell, double) {
      const std::size_t index = g.index(cell);
      if (cell == end_cell) {
        if (hit) {
          grid.logodds_[index] = std::clamp(grid.logodds_[index] + model.l_occ, -model.l_clamp, model.l_clamp);
          touch(index);
        }
        return false;
      }
      grid.logodds_[index] = std::clamp(grid.logodds_[index] + model.l_free, -model.l_clamp, model.l_clamp);
      touch(index);
      return true;
    });
  }
  ++grid.revision_;
}

}  // namespace fieldnav
