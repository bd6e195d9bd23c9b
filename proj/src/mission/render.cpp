#include "fieldnav/mission/render.hpp"

#include <algorithm>
#include <cmath>

namespace fieldnav {

MapImage::MapImage(const OccupancyGrid& map, int scale, const OccupancyThresholds& thresholds)
    : geometry_(map.geometry()),
      scale_(std::max(scale, 1)),
      width_(map.geometry().width * scale_),
      height_(map.geometry().height * scale_),
      pixels_(static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_)) {
  const auto classes = map.classify(thresholds);
  for (std::size_t i = 0; i < classes.size(); ++i) {
    const Rgb color = classes[i] == CellClass::kFree       ? Rgb{254, 254, 254}
                      : classes[i] == CellClass::kOccupied ? Rgb{0, 0, 0}
                                                           : Rgb{205, 205, 205};
    fill_cell(geometry_.cell_at(i), color);
  }
}

void MapImage::put(int x, int y, Rgb color) {
  if (x >= 0 && y >= 0 && x < width_ && y < height_) {
    pixels_[static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x)] = color;
  }
}

std::pair<double, double> MapImage::to_pixel(const Point2& p) const {
  const double u = (p.x - geometry_.origin.x) / geometry_.resolution * scale_;
  const double v = height_ - (p.y - geometry_.origin.y) / geometry_.resolution * scale_;
  return {u, v};
}

void MapImage::fill_cell(const Cell& c, Rgb color) {
  const int top = (geometry_.height - 1 - c.y) * scale_;
  for (int dy = 0; dy < scale_; ++dy) {
    for (int dx = 0; dx < scale_; ++dx) {
      put(c.x * scale_ + dx, top + dy, color);
    }
  }
}

void MapImage::draw_polyline(std::span<const Point2> points, Rgb color) {
  for (std::size_t i = 1; i < points.size(); ++i) {
    const auto [x0, y0] = to_pixel(points[i - 1]);
    const auto [x1, y1] = to_pixel(points[i]);
    const int steps = std::max(1, static_cast<int>(std::ceil(std::max(std::abs(x1 - x0), std::abs(y1 - y0)))));
    for (int s = 0; s <= steps; ++s) {
      const double t = static_cast<double>(s) / steps;
      put(static_cast<int>(std::floor(x0 + t * (x1 - x0))), static_cast<int>(std::floor(y0 + t * (y1 - y0))), color);
    }
  }
}

void MapImage::draw_marker(const Point2& p, int radius_px, Rgb color) {
  const auto [cx, cy] = to_pixel(p);
  for (int dy = -radius_px; dy <= radius_px; ++dy) {
    for (int dx = -radius_px; dx <= radius_px; ++dx) {
      if (dx * dx + dy * dy <= radius_px * radius_px) {
        put(static_cast<int>(std::floor(cx)) + dx, static_cast<int>(std::floor(cy)) + dy, color);
      }
    }
  }
}

std::string MapImage::encode_ppm() const {
  std::string out = "P6\n" + std::to_string(width_) + " " + std::to_string(height_) + "\n255\n";
  out.reserve(out.size() + pixels_.size() * 3);
  for (const Rgb& p : pixels_) {
    out.push_back(static_cast<char>(p.r));
    out.push_back(static_cast<char>(p.g));
    out.push_back(static_cast<char>(p.b));
  }
  return out;
}

Rgb label_color(FusedLabel label) {
  switch (label) {
    case FusedLabel::kBrown:
      return {150, 75, 0};
    case FusedLabel::kYellow:
      return {230, 200, 0};
    case FusedLabel::kHealthy:
      return {40, 170, 40};
    case FusedLabel::kUnresolved:
      return {200, 0, 200};
  }
  return {200, 0, 200};
}

}  // namespace fieldnav
