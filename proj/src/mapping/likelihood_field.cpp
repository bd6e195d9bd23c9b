#include "fieldnav/mapping/likelihood_field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fieldnav/core/distance_transform.hpp"

namespace fieldnav {

ScanPoints scan_points(const LaserScan& scan, int decimation, double shift) {
  const auto step = static_cast<std::size_t>(std::max(decimation, 1));
  ScanPoints points;
  points.x.reserve(scan.ranges.size() / step + 1);
  points.y.reserve(scan.ranges.size() / step + 1);
  for (std::size_t i = 0; i < scan.ranges.size(); i += step) {
    if (!scan.is_return(i)) {
      continue;
    }
    const double a = scan.beam_angle(i);
    const double r = scan.ranges[i] + shift;
    points.x.push_back(r * std::cos(a));
    points.y.push_back(r * std::sin(a));
  }
  return points;
}

double likelihood_term(double distance, const LikelihoodModel& model) {
  const double z = distance / model.sigma_hit;
  const double density = std::exp(-0.5 * z * z) / (model.sigma_hit * std::sqrt(2.0 * std::numbers::pi));
  return std::log(density + model.floor);
}

LikelihoodField::LikelihoodField(const OccupancyGrid& grid, const LikelihoodModel& model,
                                 const OccupancyThresholds& thresholds)
    : geometry_(grid.geometry()),
      thresholds_(thresholds),
      floor_term_(std::log(model.floor)),
      source_revision_(grid.revision()) {
  // Squared distances are integers in cell units, so the per-cell term is a table lookup. The table
  // stops where the Gaussian no longer changes log(density + floor) in double precision; every
  // cell at least `reach_` cells from all sources therefore holds exactly the floor term.
  const std::size_t cap = static_cast<std::size_t>(geometry_.width + 2) * static_cast<std::size_t>(geometry_.width + 2) +
                          static_cast<std::size_t>(geometry_.height + 2) * static_cast<std::size_t>(geometry_.height + 2);
  for (std::size_t k = 0; k <= cap; ++k) {
    const double term = likelihood_term(std::sqrt(static_cast<double>(k)) * geometry_.resolution, model);
    if (term == floor_term_) {
      break;
    }
    terms_.push_back(term);
  }
  reach_ = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(terms_.size()))));

  sources_ = padded_sources(grid);
  values_.assign(sources_.size(), floor_term_);
  has_obstacles_ = std::find(sources_.begin(), sources_.end(), 1) != sources_.end();
  if (has_obstacles_) {
    fill_region(0, 0, geometry_.width + 2, geometry_.height + 2);
  }
}

std::vector<std::uint8_t> LikelihoodField::padded_sources(const OccupancyGrid& grid) const {
  const auto w = static_cast<std::size_t>(geometry_.width + 2);
  const auto classes = grid.classify(thresholds_);
  std::vector<std::uint8_t> sources(w * static_cast<std::size_t>(geometry_.height + 2), 0);
  for (int y = 0; y < geometry_.height; ++y) {
    for (int x = 0; x < geometry_.width; ++x) {
      if (classes[geometry_.index({x, y})] == CellClass::kOccupied) {
        sources[static_cast<std::size_t>(y + 1) * w + static_cast<std::size_t>(x + 1)] = 1;
      }
    }
  }
  return sources;
}

void LikelihoodField::fill_region(int x0, int y0, int x1, int y1) {
  const int w = geometry_.width + 2;
  const int h = geometry_.height + 2;
  const int ox0 = std::max(0, x0 - reach_);
  const int oy0 = std::max(0, y0 - reach_);
  const int ox1 = std::min(w, x1 + reach_);
  const int oy1 = std::min(h, y1 + reach_);
  const int sw = ox1 - ox0;
  const int sh = oy1 - oy0;

  std::vector<std::uint8_t> window(static_cast<std::size_t>(sw) * static_cast<std::size_t>(sh));
  for (int y = 0; y < sh; ++y) {
    const auto* row = sources_.data() + static_cast<std::size_t>(y + oy0) * static_cast<std::size_t>(w) + ox0;
    std::copy(row, row + sw, window.begin() + static_cast<std::ptrdiff_t>(y) * sw);
  }
  const auto squared = squared_distance_transform(sw, sh, window);
  for (int y = y0; y < y1; ++y) {
    for (int x = x0; x < x1; ++x) {
      const double d2 = squared[static_cast<std::size_t>(y - oy0) * static_cast<std::size_t>(sw) +
                                static_cast<std::size_t>(x - ox0)];
      const auto k = std::isfinite(d2) ? static_cast<std::size_t>(d2) : terms_.size();
      values_[static_cast<std::size_t>(y) * static_cast<std::size_t>(w) + static_cast<std::size_t>(x)] =
          k < terms_.size() ? terms_[k] : floor_term_;
    }
  }
}

std::shared_ptr<const LikelihoodField> LikelihoodField::refreshed(const OccupancyGrid& grid) const {
  if (!(grid.geometry() == geometry_)) {
    throw std::invalid_argument("LikelihoodField::refreshed: grid geometry changed");
  }
  auto sources = padded_sources(grid);
  const int w = geometry_.width + 2;
  int x0 = w;
  int y0 = geometry_.height + 2;
  int x1 = -1;
  int y1 = -1;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (sources[i] != sources_[i]) {
      const int x = static_cast<int>(i % static_cast<std::size_t>(w));
      const int y = static_cast<int>(i / static_cast<std::size_t>(w));
      x0 = std::min(x0, x);
      y0 = std::min(y0, y);
      x1 = std::max(x1, x + 1);
      y1 = std::max(y1, y + 1);
    }
  }
  auto next = std::make_shared<LikelihoodField>(*this);
  next->source_revision_ = grid.revision();
  if (x1 < 0) {
    return next;
  }
  next->sources_ = std::move(sources);
  next->has_obstacles_ = std::find(next->sources_.begin(), next->sources_.end(), 1) != next->sources_.end();
  // A changed source moves the value of every cell within reach of it.
  next->fill_region(std::max(0, x0 - reach_), std::max(0, y0 - reach_), std::min(w, x1 + reach_),
                    std::min(geometry_.height + 2, y1 + reach_));
  return next;
}

kernels::ScoreTable LikelihoodField::table() const {
  kernels::ScoreTable t;
  t.values = values_.data();
  t.width = geometry_.width + 2;
  t.height = geometry_.height + 2;
  t.inv_resolution = 1.0 / geometry_.resolution;
  t.offset_x = geometry_.origin.x * t.inv_resolution - 0.5;
  t.offset_y = geometry_.origin.y * t.inv_resolution - 0.5;
  t.outside = floor_term_;
  return t;
}

double LikelihoodField::score(const Pose& pose, const ScanPoints& points) const {
  return score(pose, points, kernels::active());
}

double LikelihoodField::score(const Pose& pose, const ScanPoints& points, const kernels::Dispatch& kernels) const {
  const kernels::Transform2 transform{pose.x, pose.y, std::cos(pose.yaw), std::sin(pose.yaw)};
  return kernels.score_endpoints(table(), transform, points.x, points.y);
}

double LikelihoodField::point_score(const Point2& p) const {
  const double x[1] = {p.x};
  const double y[1] = {p.y};
  return kernels::scalar::score_endpoints(table(), kernels::Transform2{}, x, y);
}

double scan_likelihood(const OccupancyGrid& grid, const Pose& pose, const LaserScan& scan,
                       const LikelihoodModel& model, const OccupancyThresholds& thresholds) {
  const LikelihoodField field(grid, model, thresholds);
  return field.score(pose, scan_points(scan, model.decimation, model.endpoint_shift));
}

}  // namespace fieldnav
