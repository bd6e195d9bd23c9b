#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fieldnav/cropsense/disease_map.hpp"
#include "fieldnav/mapping/occupancy_grid.hpp"

namespace fieldnav {

struct Rgb {
  std::uint8_t r{0};
  std::uint8_t g{0};
  std::uint8_t b{0};
};

/// RGB raster with the map drawn `scale` pixels per cell, top row = highest y.
class MapImage {
 public:
  MapImage(const OccupancyGrid& map, int scale, const OccupancyThresholds& thresholds = {});

  void draw_polyline(std::span<const Point2> points, Rgb color);
  void fill_cell(const Cell& c, Rgb color);
  void draw_marker(const Point2& p, int radius_px, Rgb color);

  /// Binary P6.
  [[nodiscard]] std::string encode_ppm() const;

  [[nodiscard]] int width() const { return width_; }
  [[nodiscard]] int height() const { return height_; }
  [[nodiscard]] Rgb pixel(int x, int y) const { return pixels_[static_cast<std::size_t>(y) * width_ + x]; }

 private:
  void put(int x, int y, Rgb color);
  [[nodiscard]] std::pair<double, double> to_pixel(const Point2& p) const;

  GridGeometry geometry_;
  int scale_;
  int width_;
  int height_;
  std::vector<Rgb> pixels_;
};

Rgb label_color(FusedLabel label);

}  // namespace fieldnav
