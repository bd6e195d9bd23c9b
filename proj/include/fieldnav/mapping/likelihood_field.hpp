#pragma once

#include <memory>
#include <vector>

#include "fieldnav/kernels/kernels.hpp"
#include "fieldnav/mapping/occupancy_grid.hpp"

namespace fieldnav {

struct LikelihoodModel {
  double sigma_hit{0.2};
  double floor{1e-3};
  int decimation{4};  ///< score every n-th beam
  /// Metres added to each scored range. Mapping marks the cell half a cell beyond the endpoint, so
  /// wall cell centres sit behind the measured surface; scoring the endpoint at the same offset
  /// removes a systematic pull of the pose toward walls seen from one side only.
  double endpoint_shift{0.0};
};

/// Sensor-frame endpoints of the returning beams of a scan, structure-of-arrays for the kernels.
struct ScanPoints {
  std::vector<double> x;
  std::vector<double> y;

  [[nodiscard]] std::size_t size() const { return x.size(); }
};

/// Keeps beams 0, n, 2n, ... that returned; no-return beams carry no likelihood information.
/// Each endpoint is placed at range + `shift` along its beam.
ScanPoints scan_points(const LaserScan& scan, int decimation, double shift = 0.0);

/// Per-beam term log(N(d; 0, sigma_hit) + floor).
double likelihood_term(double distance, const LikelihoodModel& model);

/// Likelihood-field measurement model over a snapshot of an occupancy grid.
///
/// Each cell stores likelihood_term(d) where d is the Euclidean distance between its centre and the
/// nearest Occupied cell centre (exact distance transform; no Occupied cell means d = infinity and
/// the term collapses to log(floor)). Beam endpoints are scored by bilinear interpolation between
/// the four surrounding cell centres, so the score is continuous in the pose.
class LikelihoodField {
 public:
  LikelihoodField(const OccupancyGrid& grid, const LikelihoodModel& model, const OccupancyThresholds& thresholds = {});

  /// Sum of per-beam terms for the scan endpoints placed at `pose`.
  [[nodiscard]] double score(const Pose& pose, const ScanPoints& points) const;
  [[nodiscard]] double score(const Pose& pose, const ScanPoints& points, const kernels::Dispatch& kernels) const;

  /// Interpolated term at one world point.
  [[nodiscard]] double point_score(const Point2& p) const;

  [[nodiscard]] bool has_obstacles() const { return has_obstacles_; }
  [[nodiscard]] double floor_term() const { return floor_term_; }
  [[nodiscard]] std::uint64_t source_revision() const { return source_revision_; }
  [[nodiscard]] kernels::ScoreTable table() const;

  /// The field of a later version of the same grid. Only the neighbourhood of cells whose
  /// Occupied status changed is recomputed; the result equals a fresh build exactly.
  [[nodiscard]] std::shared_ptr<const LikelihoodField> refreshed(const OccupancyGrid& grid) const;

 private:
  std::vector<std::uint8_t> padded_sources(const OccupancyGrid& grid) const;
  /// Recomputes values in the padded-coordinate box [x0, x1) x [y0, y1).
  void fill_region(int x0, int y0, int x1, int y1);

  GridGeometry geometry_;
  OccupancyThresholds thresholds_;
  std::vector<double> values_;          ///< (width+2) x (height+2), one-cell border
  std::vector<std::uint8_t> sources_;   ///< Occupied mask, same layout as values_
  std::vector<double> terms_;           ///< term by squared cell distance, up to saturation
  int reach_{0};                        ///< cells beyond this distance of every source hold the floor
  double floor_term_{0.0};
  bool has_obstacles_{false};
  std::uint64_t source_revision_{0};
};

/// Convenience: builds the field and scores one scan.
double scan_likelihood(const OccupancyGrid& grid, const Pose& pose, const LaserScan& scan,
                       const LikelihoodModel& model, const OccupancyThresholds& thresholds = {});

}  // namespace fieldnav
