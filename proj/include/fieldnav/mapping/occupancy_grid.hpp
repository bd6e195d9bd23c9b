#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "fieldnav/core/grid.hpp"
#include "fieldnav/kernels/kernels.hpp"
#include "fieldnav/simworld/lidar.hpp"

namespace fieldnav {

using CellClass = kernels::CellClass;

inline double logit(double p) { return std::log(p / (1.0 - p)); }

/// Inverse sensor model for log-odds updates.
struct InverseSensorModel {
  double l_occ{logit(0.7)};
  double l_free{logit(0.4)};
  double l_clamp{5.0};
  /// Hits are pushed this many cells past the measured surface so the endpoint lands inside the
  /// obstacle cell rather than in the free cell in front of it.
  double hit_extension{0.5};
};

struct OccupancyThresholds {
  double occupied{0.65};
  double free{0.35};

  [[nodiscard]] double occupied_logodds() const { return logit(occupied); }
  [[nodiscard]] double free_logodds() const { return logit(free); }
};

/// Log-odds occupancy grid. 0 is the unknown prior.
class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  explicit OccupancyGrid(const GridGeometry& geometry);

  [[nodiscard]] const GridGeometry& geometry() const { return geometry_; }

  [[nodiscard]] double logodds(const Cell& c) const { return logodds_[geometry_.index(c)]; }
  [[nodiscard]] std::span<const double> logodds() const { return logodds_; }
  void set_logodds(const Cell& c, double value);

  /// Adds delta to one cell and clamps to [-clamp, clamp].
  void update(std::size_t index, double delta, double clamp);

  [[nodiscard]] double probability(const Cell& c) const { return 1.0 - 1.0 / (1.0 + std::exp(logodds(c))); }

  [[nodiscard]] CellClass classify(const Cell& c, const OccupancyThresholds& t = {}) const;
  [[nodiscard]] std::vector<CellClass> classify(const OccupancyThresholds& t = {}) const;

  /// How many beams have traversed or ended in the cell (saturating).
  [[nodiscard]] std::uint16_t observations(const Cell& c) const { return observations_[geometry_.index(c)]; }
  [[nodiscard]] std::span<const std::uint16_t> observations() const { return observations_; }

  /// Bumped on every mutation; lets callers cache derived fields.
  [[nodiscard]] std::uint64_t revision() const { return revision_; }

  friend bool operator==(const OccupancyGrid& a, const OccupancyGrid& b) {
    return a.geometry_ == b.geometry_ && a.logodds_ == b.logodds_ && a.observations_ == b.observations_;
  }

 private:
  friend void integrate_scan(OccupancyGrid&, const Pose&, const LaserScan&, const InverseSensorModel&);

  GridGeometry geometry_{};
  std::vector<double> logodds_;
  std::vector<std::uint16_t> observations_;
  std::uint64_t revision_{0};
};

/// Ray-casts every beam into the grid: cells before the endpoint get l_free, the endpoint cell of a
/// return gets l_occ. No-return beams only clear space. Beams leaving the grid are truncated.
void integrate_scan(OccupancyGrid& grid, const Pose& pose, const LaserScan& scan, const InverseSensorModel& model);

}  // namespace fieldnav
