// Scalar reference kernels. The AVX2 variants in avx2.cpp mirror this arithmetic operation for
// operation; keep the two files in lockstep.

#include <cmath>

#include "fieldnav/kernels/kernels.hpp"

namespace fieldnav::kernels::scalar {
namespace {

inline double score_one(const ScoreTable& t, const Transform2& pose, double bx, double by) {
  const double wx = pose.tx + (pose.cos_yaw * bx - pose.sin_yaw * by);
  const double wy = pose.ty + (pose.sin_yaw * bx + pose.cos_yaw * by);
  const double u = wx * t.inv_resolution - t.offset_x;
  const double v = wy * t.inv_resolution - t.offset_y;
  if (!(u >= 0.0 && u < static_cast<double>(t.width - 1) && v >= 0.0 && v < static_cast<double>(t.height - 1))) {
    return t.outside;
  }
  const double fu = std::floor(u);
  const double fv = std::floor(v);
  const double ax = u - fu;
  const double ay = v - fv;
  const double* lower = t.values + static_cast<int>(fv) * t.width + static_cast<int>(fu);
  const double* upper = lower + t.width;
  const double a = lower[0] + ax * (lower[1] - lower[0]);
  const double b = upper[0] + ax * (upper[1] - upper[0]);
  return a + ay * (b - a);
}

}  // namespace

double score_endpoints(const ScoreTable& table, const Transform2& pose, std::span<const double> xs,
                       std::span<const double> ys) {
  double lanes[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < xs.size(); ++i) {
    lanes[i & 3U] += score_one(table, pose, xs[i], ys[i]);
  }
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

void classify(std::span<const double> values, double occupied_above, double free_below, std::span<CellClass> out) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    out[i] = v > occupied_above ? CellClass::kOccupied : (v < free_below ? CellClass::kFree : CellClass::kUnknown);
  }
}

Moments moments(std::span<const double> values) {
  double sum[4] = {0.0, 0.0, 0.0, 0.0};
  double squares[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    sum[i & 3U] += v;
    squares[i & 3U] += v * v;
  }
  return {(sum[0] + sum[1]) + (sum[2] + sum[3]), (squares[0] + squares[1]) + (squares[2] + squares[3])};
}

void scale(std::span<double> values, double factor) {
  for (double& v : values) {
    v *= factor;
  }
}

}  // namespace fieldnav::kernels::scalar
