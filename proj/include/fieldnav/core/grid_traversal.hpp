#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "fieldnav/core/grid.hpp"

namespace fieldnav {

/// Visits, in order, every grid cell pierced by the segment `from` -> `to` (Amanatides-Woo traversal).
///
/// The segment is clipped to the grid rectangle first. `visit(Cell, double t_enter)` receives the
/// segment parameter in [0, 1] at which the ray enters the cell and returns false to stop early.
/// When the ray crosses a cell corner exactly, the y-neighbour is visited before the diagonal.
template <class Visitor>
void traverse_segment(const GridGeometry& grid, const Point2& from, const Point2& to, Visitor&& visit) {
  constexpr double kInf = std::numeric_limits<double>::infinity();

  const double gx0 = (from.x - grid.origin.x) / grid.resolution;
  const double gy0 = (from.y - grid.origin.y) / grid.resolution;
  const double dx = (to.x - grid.origin.x) / grid.resolution - gx0;
  const double dy = (to.y - grid.origin.y) / grid.resolution - gy0;

  double t_begin = 0.0;
  double t_end = 1.0;
  const auto clip = [&](double p, double d, double hi) {
    if (d == 0.0) {
      return p >= 0.0 && p < hi;
    }
    double ta = (0.0 - p) / d;
    double tb = (hi - p) / d;
    if (ta > tb) {
      std::swap(ta, tb);
    }
    t_begin = std::max(t_begin, ta);
    t_end = std::min(t_end, tb);
    return t_begin <= t_end;
  };
  if (!clip(gx0, dx, grid.width) || !clip(gy0, dy, grid.height)) {
    return;
  }

  int cx = std::clamp(static_cast<int>(std::floor(gx0 + t_begin * dx)), 0, grid.width - 1);
  int cy = std::clamp(static_cast<int>(std::floor(gy0 + t_begin * dy)), 0, grid.height - 1);

  const int step_x = dx > 0.0 ? 1 : (dx < 0.0 ? -1 : 0);
  const int step_y = dy > 0.0 ? 1 : (dy < 0.0 ? -1 : 0);
  const double t_delta_x = step_x != 0 ? 1.0 / std::abs(dx) : kInf;
  const double t_delta_y = step_y != 0 ? 1.0 / std::abs(dy) : kInf;
  double t_max_x = step_x > 0 ? (cx + 1 - gx0) / dx : (step_x < 0 ? (cx - gx0) / dx : kInf);
  double t_max_y = step_y > 0 ? (cy + 1 - gy0) / dy : (step_y < 0 ? (cy - gy0) / dy : kInf);

  double t_enter = t_begin;
  while (true) {
    if (!visit(Cell{cx, cy}, t_enter)) {
      return;
    }
    if (t_max_x < t_max_y) {
      if (t_max_x > t_end) {
        return;
      }
      t_enter = t_max_x;
      cx += step_x;
      t_max_x += t_delta_x;
    } else {
      if (t_max_y > t_end) {
        return;
      }
      t_enter = t_max_y;
      cy += step_y;
      t_max_y += t_delta_y;
    }
    if (!grid.contains(Cell{cx, cy})) {
      return;
    }
  }
}

}  // namespace fieldnav
