#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "fieldnav/kernels/kernels.hpp"

namespace fieldnav::kernels {
namespace {

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

class KernelEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    if (!available(Isa::kAvx2)) {
      GTEST_SKIP() << "AVX2 not available";
    }
  }
  std::mt19937_64 rng{42};
};

TEST(Dispatch, ActiveTableIsAvailable) {
  const Dispatch& d = active();
  EXPECT_TRUE(available(d.isa));
  EXPECT_TRUE(available(Isa::kScalar));
  EXPECT_EQ(name(Isa::kScalar), "scalar");
  EXPECT_EQ(name(Isa::kAvx2), "avx2");
  EXPECT_EQ(table(Isa::kScalar).isa, Isa::kScalar);
}

TEST(Scalar, ScoreInterpolatesBilinearly) {
  // 2x2 map -> 4x4 padded table, resolution 1, origin 0: centre of map cell (0,0) is table (1,1).
  std::vector<double> values(16, 0.0);
  values[1 * 4 + 1] = 1.0;
  values[1 * 4 + 2] = 3.0;
  const ScoreTable t{values.data(), 4, 4, 1.0, -0.5, -0.5, -7.0};
  const std::vector<double> xs{0.5, 1.0, 1.5, 100.0};
  const std::vector<double> ys{0.5, 0.5, 0.5, 0.5};
  EXPECT_DOUBLE_EQ(scalar::score_endpoints(t, {}, std::span(xs).first(1), std::span(ys).first(1)), 1.0);
  EXPECT_DOUBLE_EQ(scalar::score_endpoints(t, {}, std::span(xs).subspan(1, 1), std::span(ys).subspan(1, 1)), 2.0);
  EXPECT_DOUBLE_EQ(scalar::score_endpoints(t, {}, std::span(xs).subspan(3), std::span(ys).subspan(3)), -7.0);
}

TEST(Scalar, ClassifyMomentsScale) {
  const std::vector<double> v{-1.0, 0.0, 1.0, 0.5};
  std::vector<CellClass> out(v.size());
  scalar::classify(v, 0.6, -0.6, out);
  EXPECT_EQ(out, (std::vector<CellClass>{CellClass::kFree, CellClass::kUnknown, CellClass::kOccupied,
                                         CellClass::kUnknown}));
  const Moments m = scalar::moments(v);
  EXPECT_DOUBLE_EQ(m.sum, 0.5);
  EXPECT_DOUBLE_EQ(m.sum_squares, 2.25);
  std::vector<double> w = v;
  scalar::scale(w, 2.0);
  EXPECT_EQ(w, (std::vector<double>{-2.0, 0.0, 2.0, 1.0}));
}

TEST_F(KernelEquivalence, ScoreEndpoints) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int w = 3 + trial % 40;
    const int h = 3 + (trial * 7) % 40;
    std::vector<double> values(static_cast<std::size_t>(w * h));
    for (double& v : values) {
      v = u(rng) * 5.0;
    }
    const double res = 0.1 + 0.05 * (trial % 5);
    const ScoreTable t{values.data(), w, h, 1.0 / res, 0.5, 0.5, -3.0};
    const Transform2 pose{u(rng) * 2 + w * res / 2, u(rng) * 2 + h * res / 2, std::cos(u(rng) * 3),
                          std::sin(u(rng) * 3)};
    const std::size_t n = static_cast<std::size_t>(trial % 97);  // covers every tail length
    std::vector<double> xs(n);
    std::vector<double> ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      xs[i] = u(rng) * w * res;
      ys[i] = u(rng) * h * res;
    }
    const double a = scalar::score_endpoints(t, pose, xs, ys);
    const double b = avx2::score_endpoints(t, pose, xs, ys);
    EXPECT_TRUE(same_bits(a, b)) << trial << ": " << a << " vs " << b;
  }
}

TEST_F(KernelEquivalence, Classify) {
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 1000u}) {
    std::vector<double> v(n);
    for (double& x : v) {
      x = u(rng);
    }
    if (n > 2) {
      v[0] = 0.6;  // boundaries are strict on both sides
      v[1] = -0.6;
    }
    std::vector<CellClass> a(n);
    std::vector<CellClass> b(n);
    scalar::classify(v, 0.6, -0.6, a);
    avx2::classify(v, 0.6, -0.6, b);
    EXPECT_EQ(a, b) << n;
  }
}

TEST_F(KernelEquivalence, MomentsAndScale) {
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 7u, 8u, 9u, 1001u, 4096u}) {
    std::vector<double> v(n);
    for (double& x : v) {
      x = u(rng);
    }
    const Moments a = scalar::moments(v);
    const Moments b = avx2::moments(v);
    EXPECT_TRUE(same_bits(a.sum, b.sum)) << n;
    EXPECT_TRUE(same_bits(a.sum_squares, b.sum_squares)) << n;
    std::vector<double> sa = v;
    std::vector<double> sb = v;
    scalar::scale(sa, 1.0 / 3.0);
    avx2::scale(sb, 1.0 / 3.0);
    EXPECT_EQ(std::memcmp(sa.data(), sb.data(), n * sizeof(double)), 0) << n;
  }
}

}  // namespace
}  // namespace fieldnav::kernels
