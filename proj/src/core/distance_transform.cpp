#include "fieldnav/core/distance_transform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace fieldnav {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// One-dimensional lower envelope of parabolas rooted at the finite samples of f.
void envelope_1d(const double* f, int n, std::ptrdiff_t stride, double* out, std::vector<int>& v,
                 std::vector<double>& z) {
  int k = -1;
  for (int q = 0; q < n; ++q) {
    const double fq = f[q * stride];
    if (!std::isfinite(fq)) {
      continue;
    }
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -kInf;
      z[1] = kInf;
      continue;
    }
    double s = 0.0;
    while (true) {
      const int p = v[static_cast<std::size_t>(k)];
      const double fp = f[p * stride];
      s = ((fq + static_cast<double>(q) * q) - (fp + static_cast<double>(p) * p)) / (2.0 * q - 2.0 * p);
      if (s <= z[static_cast<std::size_t>(k)]) {
        --k;
      } else {
        break;
      }
    }
    ++k;
    v[static_cast<std::size_t>(k)] = q;
    z[static_cast<std::size_t>(k)] = s;
    z[static_cast<std::size_t>(k) + 1] = kInf;
  }

  if (k < 0) {
    for (int q = 0; q < n; ++q) {
      out[q * stride] = kInf;
    }
    return;
  }

  k = 0;
  for (int q = 0; q < n; ++q) {
    while (z[static_cast<std::size_t>(k) + 1] < q) {
      ++k;
    }
    const int p = v[static_cast<std::size_t>(k)];
    const double d = static_cast<double>(q - p);
    out[q * stride] = d * d + f[p * stride];
  }
}

}  // namespace

std::vector<double> squared_distance_transform(int width, int height, std::span<const std::uint8_t> sources) {
  const auto size = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (width < 0 || height < 0 || sources.size() != size) {
    throw std::invalid_argument("distance transform: mask size does not match dimensions");
  }

  std::vector<double> column_pass(size);
  for (std::size_t i = 0; i < size; ++i) {
    column_pass[i] = sources[i] != 0 ? 0.0 : kInf;
  }

  const int longest = std::max(width, height);
  std::vector<int> v(static_cast<std::size_t>(longest) + 1);
  std::vector<double> z(static_cast<std::size_t>(longest) + 2);

  std::vector<double> scratch(size);
  for (int x = 0; x < width; ++x) {
    envelope_1d(column_pass.data() + x, height, width, scratch.data() + x, v, z);
  }
  std::vector<double> result(size);
  for (int y = 0; y < height; ++y) {
    const auto row = static_cast<std::ptrdiff_t>(y) * width;
    envelope_1d(scratch.data() + row, width, 1, result.data() + row, v, z);
  }
  return result;
}

}  // namespace fieldnav
