#pragma once

#include <string>
#include <string_view>

#include "fieldnav/mapping/occupancy_grid.hpp"

namespace fieldnav {

inline constexpr unsigned char kPgmFree = 254;
inline constexpr unsigned char kPgmOccupied = 0;
inline constexpr unsigned char kPgmUnknown = 205;

/// Binary P5 image, one byte per cell, top row = highest y.
std::string encode_pgm(const OccupancyGrid& grid, const OccupancyThresholds& thresholds = {});

/// Companion metadata (flat key = value text).
std::string encode_map_metadata(const OccupancyGrid& grid, const std::string& image_name,
                                const OccupancyThresholds& thresholds = {});

/// Rebuilds a grid from a P5 image plus metadata. Free cells become -l_clamp, Occupied +l_clamp,
/// everything else unknown (0).
OccupancyGrid decode_map(std::string_view pgm, std::string_view metadata, double l_clamp = 5.0);

/// Reads `<path>` and `<path minus .pgm>.meta` (or `metadata_path` when given).
OccupancyGrid load_map(const std::string& pgm_path, const std::string& metadata_path = {});

std::string metadata_path_for(const std::string& pgm_path);

}  // namespace fieldnav
