#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fieldnav/core/grid.hpp"

namespace fieldnav {

/// Disease classes of a crop cell, in confusion-matrix order.
enum class CropClass : std::uint8_t { kBrown = 0, kYellow = 1, kHealthy = 2 };

inline constexpr int kCropClassCount = 3;

std::string_view to_string(CropClass c);

enum class CellKind : std::uint8_t { kFree, kObstacle, kCropBrown, kCropYellow, kCropHealthy };

std::optional<CropClass> crop_class(CellKind kind);

/// Raised by load_world; carries the 1-based text position of the problem.
class WorldParseError : public std::runtime_error {
 public:
  WorldParseError(int line, int column, const std::string& what);

  [[nodiscard]] int line() const { return line_; }
  [[nodiscard]] int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Ground-truth field: obstacles block lidar and motion, crop cells are flown over.
class World {
 public:
  World(GridGeometry geometry, std::vector<CellKind> cells);

  [[nodiscard]] const GridGeometry& geometry() const { return geometry_; }
  [[nodiscard]] int width() const { return geometry_.width; }
  [[nodiscard]] int height() const { return geometry_.height; }
  [[nodiscard]] double resolution() const { return geometry_.resolution; }

  [[nodiscard]] CellKind kind(const Cell& c) const { return cells_[geometry_.index(c)]; }

  /// Cells outside the grid are not obstacles.
  [[nodiscard]] bool is_obstacle(const Cell& c) const {
    return geometry_.contains(c) && cells_[geometry_.index(c)] == CellKind::kObstacle;
  }

  [[nodiscard]] const std::vector<CellKind>& cells() const { return cells_; }

  friend bool operator==(const World&, const World&) = default;

 private:
  GridGeometry geometry_;
  std::vector<CellKind> cells_;
};

/// Parses the ASCII world format:
///
///   resolution <meters per cell>
///   origin <x> <y>            (optional)
///   <rows of . # B Y H>       first text row = highest y
///
/// Blank lines and lines starting with '%' are ignored anywhere.
World load_world(std::string_view text);

World load_world_file(const std::string& path);

std::string serialize_world(const World& world);

}  // namespace fieldnav
