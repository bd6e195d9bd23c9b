#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace fieldnav {

/// Exact squared Euclidean distance transform (Felzenszwalb-Huttenlocher lower envelope).
///
/// `sources` is a row-major width x height mask; nonzero marks a source cell. Returns, per cell,
/// the squared distance in cell units between that cell's center and the nearest source center.
/// Cells with no source anywhere in the grid get +infinity. Values are integers held in doubles.
std::vector<double> squared_distance_transform(int width, int height, std::span<const std::uint8_t> sources);

}  // namespace fieldnav
