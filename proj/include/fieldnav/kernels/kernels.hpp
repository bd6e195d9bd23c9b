#pragma once

// Data-parallel inner loops of the estimation stack.
//
// Each kernel has a scalar reference implementation and, on x86-64, an AVX2 variant. The variant
// is chosen once at runtime from CPUID (override with FIELDNAV_SIMD=scalar|avx2). Both variants
// follow the same arithmetic order, with partial sums kept in four interleaved lanes, so they
// return bit-identical results; the equivalence tests check that exactly.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace fieldnav::kernels {

/// Padded, cell-centred lookup table scored by bilinear interpolation.
///
/// The table covers the map plus a one-cell border on every side (so `width` and `height` are the
/// map dimensions + 2). A world point p maps to continuous table coordinates
///   u = p.x * inv_resolution - offset_x,   v = p.y * inv_resolution - offset_y
/// where integer (u, v) are padded cell centres. Points whose 2x2 neighbourhood leaves the table
/// score `outside`.
struct ScoreTable {
  const double* values{nullptr};
  int width{0};
  int height{0};
  double inv_resolution{1.0};
  double offset_x{0.0};
  double offset_y{0.0};
  double outside{0.0};
};

/// Rigid 2D transform applied to sensor-frame endpoints: world = (tx, ty) + R(cos, sin) * p.
struct Transform2 {
  double tx{0.0};
  double ty{0.0};
  double cos_yaw{1.0};
  double sin_yaw{0.0};
};

enum class CellClass : std::uint8_t { kFree = 0, kUnknown = 1, kOccupied = 2 };

struct Moments {
  double sum{0.0};
  double sum_squares{0.0};
};

enum class Isa { kScalar, kAvx2 };

struct Dispatch {
  Isa isa;
  /// Sum over endpoints of the interpolated table value at the transformed endpoint.
  double (*score_endpoints)(const ScoreTable& table, const Transform2& pose, std::span<const double> xs,
                            std::span<const double> ys);
  /// occupied if value > occupied_above, free if value < free_below, unknown otherwise.
  void (*classify)(std::span<const double> values, double occupied_above, double free_below,
                   std::span<CellClass> out);
  Moments (*moments)(std::span<const double> values);
  void (*scale)(std::span<double> values, double factor);
};

/// The kernel table selected for this process.
const Dispatch& active();

/// A specific table; throws std::invalid_argument if the ISA is not available on this machine.
const Dispatch& table(Isa isa);

bool available(Isa isa);

std::string_view name(Isa isa);

namespace scalar {
double score_endpoints(const ScoreTable& table, const Transform2& pose, std::span<const double> xs,
                       std::span<const double> ys);
void classify(std::span<const double> values, double occupied_above, double free_below, std::span<CellClass> out);
Moments moments(std::span<const double> values);
void scale(std::span<double> values, double factor);
}  // namespace scalar

namespace avx2 {
double score_endpoints(const ScoreTable& table, const Transform2& pose, std::span<const double> xs,
                       std::span<const double> ys);
void classify(std::span<const double> values, double occupied_above, double free_below, std::span<CellClass> out);
Moments moments(std::span<const double> values);
void scale(std::span<double> values, double factor);
}  // namespace avx2

}  // namespace fieldnav::kernels
