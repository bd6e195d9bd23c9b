#include <immintrin.h>

#include <array>
#include <cstring>

#include "fieldnav/kernels/kernels.hpp"

namespace fieldnav::kernels::avx2 {
namespace {

// Lane masks for a 1..3 element tail.
inline __m256i tail_mask(std::size_t remaining) {
  return _mm256_setr_epi64x(remaining > 0 ? -1 : 0, remaining > 1 ? -1 : 0, remaining > 2 ? -1 : 0, 0);
}

inline double horizontal_sum(__m256d acc) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

struct ScoreContext {
  __m256d tx, ty, c, s, inv_res, off_x, off_y, u_limit, v_limit, outside, zero;
  __m128i width;
  const double* base;
};

inline __m256d score_four(const ScoreContext& k, __m256d bx, __m256d by) {
  const __m256d wx = _mm256_add_pd(k.tx, _mm256_sub_pd(_mm256_mul_pd(k.c, bx), _mm256_mul_pd(k.s, by)));
  const __m256d wy = _mm256_add_pd(k.ty, _mm256_add_pd(_mm256_mul_pd(k.s, bx), _mm256_mul_pd(k.c, by)));
  const __m256d u = _mm256_sub_pd(_mm256_mul_pd(wx, k.inv_res), k.off_x);
  const __m256d v = _mm256_sub_pd(_mm256_mul_pd(wy, k.inv_res), k.off_y);

  const __m256d inside = _mm256_and_pd(
      _mm256_and_pd(_mm256_cmp_pd(u, k.zero, _CMP_GE_OQ), _mm256_cmp_pd(u, k.u_limit, _CMP_LT_OQ)),
      _mm256_and_pd(_mm256_cmp_pd(v, k.zero, _CMP_GE_OQ), _mm256_cmp_pd(v, k.v_limit, _CMP_LT_OQ)));

  const __m256d fu = _mm256_floor_pd(u);
  const __m256d fv = _mm256_floor_pd(v);
  const __m256d ax = _mm256_sub_pd(u, fu);
  const __m256d ay = _mm256_sub_pd(v, fv);

  // Out-of-table lanes would produce garbage indices; zero them and let the masked gathers skip.
  const __m256d safe_u = _mm256_blendv_pd(k.zero, fu, inside);
  const __m256d safe_v = _mm256_blendv_pd(k.zero, fv, inside);
  const __m128i i = _mm256_cvttpd_epi32(safe_u);
  const __m128i j = _mm256_cvttpd_epi32(safe_v);
  const __m128i idx = _mm_add_epi32(_mm_mullo_epi32(j, k.width), i);
  const __m128i idx_up = _mm_add_epi32(idx, k.width);
  const __m128i one = _mm_set1_epi32(1);

  const __m256d l0 = _mm256_mask_i32gather_pd(k.outside, k.base, idx, inside, 8);
  const __m256d l1 = _mm256_mask_i32gather_pd(k.outside, k.base, _mm_add_epi32(idx, one), inside, 8);
  const __m256d u0 = _mm256_mask_i32gather_pd(k.outside, k.base, idx_up, inside, 8);
  const __m256d u1 = _mm256_mask_i32gather_pd(k.outside, k.base, _mm_add_epi32(idx_up, one), inside, 8);

  const __m256d a = _mm256_add_pd(l0, _mm256_mul_pd(ax, _mm256_sub_pd(l1, l0)));
  const __m256d b = _mm256_add_pd(u0, _mm256_mul_pd(ax, _mm256_sub_pd(u1, u0)));
  const __m256d value = _mm256_add_pd(a, _mm256_mul_pd(ay, _mm256_sub_pd(b, a)));
  return _mm256_blendv_pd(k.outside, value, inside);
}

// Byte patterns for classify: index = occupied_bits * 16 + free_bits.
constexpr std::array<std::uint32_t, 256> make_class_table() {
  std::array<std::uint32_t, 256> table{};
  for (unsigned occ = 0; occ < 16; ++occ) {
    for (unsigned fr = 0; fr < 16; ++fr) {
      std::uint32_t word = 0;
      for (unsigned lane = 0; lane < 4; ++lane) {
        std::uint32_t byte = 1;
        if ((occ >> lane) & 1U) {
          byte = 2;
        } else if ((fr >> lane) & 1U) {
          byte = 0;
        }
        word |= byte << (8U * lane);
      }
      table[occ * 16 + fr] = word;
    }
  }
  return table;
}

constexpr auto kClassTable = make_class_table();

}  // namespace

double score_endpoints(const ScoreTable& table, const Transform2& pose, std::span<const double> xs,
                       std::span<const double> ys) {
  ScoreContext k{};
  k.tx = _mm256_set1_pd(pose.tx);
  k.ty = _mm256_set1_pd(pose.ty);
  k.c = _mm256_set1_pd(pose.cos_yaw);
  k.s = _mm256_set1_pd(pose.sin_yaw);
  k.inv_res = _mm256_set1_pd(table.inv_resolution);
  k.off_x = _mm256_set1_pd(table.offset_x);
  k.off_y = _mm256_set1_pd(table.offset_y);
  k.u_limit = _mm256_set1_pd(static_cast<double>(table.width - 1));
  k.v_limit = _mm256_set1_pd(static_cast<double>(table.height - 1));
  k.outside = _mm256_set1_pd(table.outside);
  k.zero = _mm256_setzero_pd();
  k.width = _mm_set1_epi32(table.width);
  k.base = table.values;

  const std::size_t n = xs.size();
  const std::size_t full = n & ~std::size_t{3};
  __m256d acc = _mm256_setzero_pd();
  for (std::size_t i = 0; i < full; i += 4) {
    acc = _mm256_add_pd(acc, score_four(k, _mm256_loadu_pd(xs.data() + i), _mm256_loadu_pd(ys.data() + i)));
  }
  if (full < n) {
    const __m256i mask = tail_mask(n - full);
    const __m256d bx = _mm256_maskload_pd(xs.data() + full, mask);
    const __m256d by = _mm256_maskload_pd(ys.data() + full, mask);
    const __m256d value = score_four(k, bx, by);
    acc = _mm256_add_pd(acc, _mm256_blendv_pd(k.zero, value, _mm256_castsi256_pd(mask)));
  }
  return horizontal_sum(acc);
}

void classify(std::span<const double> values, double occupied_above, double free_below, std::span<CellClass> out) {
  const __m256d occ = _mm256_set1_pd(occupied_above);
  const __m256d fr = _mm256_set1_pd(free_below);
  const std::size_t n = values.size();
  const std::size_t full = n & ~std::size_t{3};
  for (std::size_t i = 0; i < full; i += 4) {
    const __m256d v = _mm256_loadu_pd(values.data() + i);
    const int occ_bits = _mm256_movemask_pd(_mm256_cmp_pd(v, occ, _CMP_GT_OQ));
    const int free_bits = _mm256_movemask_pd(_mm256_cmp_pd(v, fr, _CMP_LT_OQ));
    const std::uint32_t word = kClassTable[static_cast<std::size_t>(occ_bits * 16 + free_bits)];
    std::memcpy(out.data() + i, &word, sizeof(word));
  }
  for (std::size_t i = full; i < n; ++i) {
    const double v = values[i];
    out[i] = v > occupied_above ? CellClass::kOccupied : (v < free_below ? CellClass::kFree : CellClass::kUnknown);
  }
}

Moments moments(std::span<const double> values) {
  const std::size_t n = values.size();
  const std::size_t full = n & ~std::size_t{3};
  __m256d sum = _mm256_setzero_pd();
  __m256d squares = _mm256_setzero_pd();
  for (std::size_t i = 0; i < full; i += 4) {
    const __m256d v = _mm256_loadu_pd(values.data() + i);
    sum = _mm256_add_pd(sum, v);
    squares = _mm256_add_pd(squares, _mm256_mul_pd(v, v));
  }
  if (full < n) {
    const __m256d v = _mm256_maskload_pd(values.data() + full, tail_mask(n - full));
    sum = _mm256_add_pd(sum, v);
    squares = _mm256_add_pd(squares, _mm256_mul_pd(v, v));
  }
  return {horizontal_sum(sum), horizontal_sum(squares)};
}

void scale(std::span<double> values, double factor) {
  const __m256d f = _mm256_set1_pd(factor);
  const std::size_t n = values.size();
  const std::size_t full = n & ~std::size_t{3};
  for (std::size_t i = 0; i < full; i += 4) {
    _mm256_storeu_pd(values.data() + i, _mm256_mul_pd(_mm256_loadu_pd(values.data() + i), f));
  }
  for (std::size_t i = full; i < n; ++i) {
    values[i] *= factor;
  }
}

}  // namespace fieldnav::kernels::avx2
