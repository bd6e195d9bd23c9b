#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>

#include "fieldnav/core/geometry.hpp"

namespace fieldnav {

struct Cell {
  int x{0};
  int y{0};

  friend bool operator==(const Cell&, const Cell&) = default;
  friend auto operator<=>(const Cell&, const Cell&) = default;
};

/// Shape and placement of a dense row-major grid. Row 0 is the lowest y.
struct GridGeometry {
  int width{0};
  int height{0};
  double resolution{1.0};
  Point2 origin{};  ///< world coordinates of the (0,0) cell's lower-left corner

  [[nodiscard]] std::size_t size() const {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }

  [[nodiscard]] bool contains(const Cell& c) const { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; }

  [[nodiscard]] bool contains(const Point2& p) const { return contains(cell_of(p)); }

  [[nodiscard]] std::size_t index(const Cell& c) const {
    return static_cast<std::size_t>(c.y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(c.x);
  }

  [[nodiscard]] Cell cell_at(std::size_t index) const {
    return {static_cast<int>(index % static_cast<std::size_t>(width)),
            static_cast<int>(index / static_cast<std::size_t>(width))};
  }

  [[nodiscard]] Cell cell_of(const Point2& p) const {
    return {static_cast<int>(std::floor((p.x - origin.x) / resolution)),
            static_cast<int>(std::floor((p.y - origin.y) / resolution))};
  }

  [[nodiscard]] Point2 center(const Cell& c) const {
    return {origin.x + (c.x + 0.5) * resolution, origin.y + (c.y + 0.5) * resolution};
  }

  friend bool operator==(const GridGeometry&, const GridGeometry&) = default;
};

inline void validate(const GridGeometry& g) {
  if (g.width < 1 || g.height < 1) {
    throw std::invalid_argument("grid dimensions must be at least 1x1");
  }
  if (!(g.resolution > 0.0) || !std::isfinite(g.resolution)) {
    throw std::invalid_argument("grid resolution must be positive");
  }
}

}  // namespace fieldnav
