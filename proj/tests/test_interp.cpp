#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "support.hpp"

using namespace depthgrid;
using depthgrid::testing::random_real;

namespace {
std::vector<double> up1(std::vector<double> in, FilterKind k, std::size_t n = 1) {
  return upsample_1d(std::span<const double>(in), builtin_filter(k), n);
}
}  // namespace

TEST(Grid, ExtentsAndSpacing) {
  EXPECT_EQ(upsampled_extent(3, 1), 5u);
  EXPECT_EQ(upsampled_extent(4, 2), 10u);
  const GridSpec g{6, 6, 2, 1};
  EXPECT_EQ(g.d_v(), Rational(2));
  EXPECT_EQ(g.d_h(), Rational(3));
  EXPECT_EQ(g.magnification_v(), 3);
}

TEST(Downsample, PhaseZero) {
  const DepthImage row(5, 1, 255, std::vector<std::uint16_t>{10, 15, 20, 25, 30});
  const DepthImage d = downsample(row);
  EXPECT_EQ(std::vector<std::uint16_t>(d.samples().begin(), d.samples().end()),
            (std::vector<std::uint16_t>{10, 20, 30}));
  const DepthImage sq(3, 3, 255, std::vector<std::uint16_t>{1, 2, 3, 4, 5, 6, 7, 8, 9});
  const DepthImage c = downsample(sq);
  EXPECT_EQ(std::vector<std::uint16_t>(c.samples().begin(), c.samples().end()),
            (std::vector<std::uint16_t>{1, 3, 7, 9}));
}

TEST(Downsample, EvenExtentRejected) {
  try {
    downsample(DepthImage(6, 5, 255, std::uint16_t{1}));
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("crop_to_odd"), std::string::npos);
  }
}

TEST(Downsample, SizeArithmetic) {
  const DepthImage img(7, 5, 255, std::uint16_t{4});
  const DepthImage d = downsample(img);
  EXPECT_EQ(d.width(), 4u);
  EXPECT_EQ(d.height(), 3u);
  const DepthImage u = upsample(d, builtin_filter(FilterKind::Grid4), 1, 1);
  EXPECT_EQ(u.width(), 7u);
  EXPECT_EQ(u.height(), 5u);
}

TEST(CropToOdd, Sizes) {
  auto dims = [](std::size_t w, std::size_t h) {
    const auto c = crop_to_odd(DepthImage(w, h, 255, std::uint16_t{1}));
    return std::pair{c.width(), c.height()};
  };
  EXPECT_EQ(dims(5, 5), (std::pair<std::size_t, std::size_t>{5, 5}));
  EXPECT_EQ(dims(6, 5), (std::pair<std::size_t, std::size_t>{5, 5}));
  EXPECT_EQ(dims(640, 480), (std::pair<std::size_t, std::size_t>{639, 479}));
}

TEST(Upsample1d, HandComputed) {
  EXPECT_EQ(up1({10, 20, 30}, FilterKind::LinearAverage), (std::vector<double>{10, 15, 20, 25, 30}));
  EXPECT_EQ(up1({10, 20, 30}, FilterKind::Grid4), (std::vector<double>{10, 14.375, 20, 25.625, 30}));
}

TEST(Upsample1d, ConstantPreserved) {
  for (auto k : kAllFilters)
    for (double v : up1({7, 7, 7, 7}, k)) EXPECT_DOUBLE_EQ(v, 7.0);
}

TEST(Upsample1d, MultiPhaseUsesLagrangeBank) {
  // N = 2 on a line: exact for a cubic grid filter away from the clamped ends.
  std::vector<double> in;
  for (int i = 0; i < 8; ++i) in.push_back(0.5 * i * i * i - 2.0 * i + 1.0);
  const auto out = up1(in, FilterKind::Grid4, 2);
  ASSERT_EQ(out.size(), upsampled_extent(8, 2));
  for (std::size_t j = 3; j + 6 < out.size(); ++j) {
    const double t = static_cast<double>(j) / 3.0;
    EXPECT_NEAR(out[j], 0.5 * t * t * t - 2.0 * t + 1.0, 1e-9);
  }
}

TEST(PhaseBank, Mismatch) {
  EXPECT_THROW(PhaseBank::for_filter(builtin_filter(FilterKind::Avs4), 2), PreconditionError);
  EXPECT_THROW(PhaseBank::for_filter(grid_adaptive_filter(4, Rational(1, 3)), 1), PreconditionError);
  EXPECT_EQ(PhaseBank::for_filter(builtin_filter(FilterKind::Grid4), 3).inserted(), 3u);
  EXPECT_EQ(PhaseBank::for_filter(builtin_filter(FilterKind::Grid4), 0).inserted(), 0u);
}

TEST(Upsample2d, SizeAndPassThrough) {
  std::mt19937_64 rng(2);
  const RealImage img = random_real(rng, 3, 3);
  const RealImage up = upsample(img, builtin_filter(FilterKind::Grid4), 1, 1);
  EXPECT_EQ(up.width(), 5u);
  EXPECT_EQ(up.height(), 5u);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(up(2 * r, 2 * c), img(r, c));
}

TEST(Upsample2d, ConstantImage) {
  for (auto k : kAllFilters) {
    const DepthImage up = upsample(DepthImage(4, 3, 255, std::uint16_t{42}), builtin_filter(k), 1, 1);
    EXPECT_EQ(up.width(), 7u);
    for (auto v : up.samples()) EXPECT_EQ(v, 42);
  }
}

TEST(Upsample2d, MatchesBruteForce) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const RealImage img = random_real(rng, 5 + rng() % 6, 5 + rng() % 6);
    for (auto k : kAllFilters) {
      const auto f = builtin_filter(k);
      const RealImage a = upsample(img, f, 1, 1);
      const RealImage b = upsample_bruteforce(img, f, 1, 1);
      for (std::size_t i = 0; i < a.size(); ++i) ASSERT_NEAR(a.samples()[i], b.samples()[i], 1e-9);
    }
    const auto g = builtin_filter(FilterKind::Grid4);
    const RealImage a = upsample(img, g, 2, 3);
    const RealImage b = upsample_bruteforce(img, g, 2, 3);
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_NEAR(a.samples()[i], b.samples()[i], 1e-9);
  }
}

TEST(Upsample2d, PassOrderInvariant) {
  std::mt19937_64 rng(4);
  const RealImage img = random_real(rng, 9, 7);
  for (auto k : kAllFilters) {
    const RealImage a = upsample(img, builtin_filter(k), 1, 1, PassOrder::RowsFirst);
    const RealImage b = upsample(img, builtin_filter(k), 1, 1, PassOrder::ColumnsFirst);
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_NEAR(a.samples()[i], b.samples()[i], 1e-9);
  }
}

TEST(Upsample2d, CubicReproducedInInterior) {
  const RealImage full = depthgrid::testing::cubic_real(33, 33);
  const RealImage up = upsample(downsample(full), builtin_filter(FilterKind::Grid4), 1, 1);
  const Region inner = Region::interior(full, 4);
  EXPECT_LT(mse(full, up, inner), 1e-12);
}
