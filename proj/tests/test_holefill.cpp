#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace depthgrid;

TEST(DetectHoles, Definitional) {
  const DepthImage row(3, 1, 255, std::vector<std::uint16_t>{5, 0, 5});
  const HoleMask m = detect_holes(row);
  EXPECT_FALSE(m(0, 0));
  EXPECT_TRUE(m(0, 1));
  EXPECT_FALSE(m(0, 2));
  EXPECT_FALSE(detect_holes(DepthImage(4, 4, 255, std::uint16_t{3})).any());
  EXPECT_EQ(detect_holes(DepthImage(4, 3, 255, std::uint16_t{0})).count(), 12u);
}

TEST(FillHoles, ConstantNeighbourhood) {
  DepthImage img(3, 3, 255, std::uint16_t{10});
  img.samples()[4] = 0;
  auto [out, rep] = fill_holes(img);
  EXPECT_EQ(out(1, 1), 10);
  EXPECT_EQ(rep.passes_run, 1u);
  EXPECT_EQ(rep.holes_remaining, 0u);
}

TEST(FillHoles, WeightedLeftRight) {
  // 3x3 all holes except the left and right of the center.
  DepthImage img(3, 3, 255, std::uint16_t{0});
  img.samples()[3] = 8;
  img.samples()[5] = 12;
  auto [out, rep] = fill_holes(img, FillKernel{}, 1);
  EXPECT_EQ(out(1, 1), 10);
}

TEST(FillHoles, RoundsHalfUp) {
  // (2*1 + 2*2) / 4 = 1.5 -> 2
  DepthImage img(3, 1, 255, std::vector<std::uint16_t>{1, 0, 2});
  EXPECT_EQ(fill_holes(img).first(0, 1), 2);
}

TEST(FillHoles, BlockTakesTwoPasses) {
  DepthImage img(9, 9, 255, std::uint16_t{50});
  for (std::size_t r = 3; r < 6; ++r)
    for (std::size_t c = 3; c < 6; ++c) img.samples()[r * 9 + c] = 0;
  auto [out, rep] = fill_holes(img);
  EXPECT_EQ(rep.passes_run, 2u);
  EXPECT_EQ(rep.per_pass_filled, (std::vector<std::size_t>{8, 1}));
  for (auto v : out.samples()) EXPECT_EQ(v, 50);
}

TEST(FillHoles, IdempotentWithoutHoles) {
  std::mt19937_64 rng(3);
  const DepthImage img = depthgrid::testing::random_depth(rng, 7, 5);
  auto [out, rep] = fill_holes(img);
  EXPECT_EQ(out, img);
  EXPECT_EQ(rep.passes_run, 0u);
}

TEST(FillHoles, AllHolesStops) {
  auto [out, rep] = fill_holes(DepthImage(4, 4, 255, std::uint16_t{0}));
  EXPECT_EQ(rep.passes_run, 1u);
  EXPECT_EQ(rep.holes_remaining, 16u);
}

TEST(FillHoles, MaxPassesHonoured) {
  DepthImage img(9, 1, 255, std::uint16_t{0});
  img.samples()[0] = 9;
  auto [out, rep] = fill_holes(img, FillKernel{}, 3);
  EXPECT_EQ(rep.passes_run, 3u);
  EXPECT_EQ(rep.holes_remaining, 5u);
  EXPECT_THROW(fill_holes(img, FillKernel{}, 0), PreconditionError);
}

TEST(FillHoles, PreservesValidPixels) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    DepthImage img = depthgrid::testing::random_depth(rng, 12, 10);
    const DepthImage before = img;
    for (auto& v : img.samples())
      if (rng() % 4 == 0) v = 0;
    const HoleMask holes = detect_holes(img);
    auto [out, rep] = fill_holes(img);
    for (std::size_t r = 0; r < img.height(); ++r)
      for (std::size_t c = 0; c < img.width(); ++c)
        if (!holes(r, c)) {
          ASSERT_EQ(out(r, c), img(r, c));
        }
    EXPECT_EQ(rep.holes_remaining, 0u);
    EXPECT_FALSE(detect_holes(out).any());
  }
}

TEST(FillHoles, OrderIndependent) {
  // Jacobi passes: mirroring the input mirrors the output.
  std::mt19937_64 rng(5);
  DepthImage img = depthgrid::testing::random_depth(rng, 11, 9);
  for (auto& v : img.samples())
    if (rng() % 3 == 0) v = 0;
  DepthImage mirrored = img;
  for (std::size_t r = 0; r < 9; ++r)
    for (std::size_t c = 0; c < 11; ++c) mirrored.samples()[r * 11 + c] = img(r, 10 - c);
  const DepthImage a = fill_holes(img).first;
  const DepthImage b = fill_holes(mirrored).first;
  for (std::size_t r = 0; r < 9; ++r)
    for (std::size_t c = 0; c < 11; ++c) EXPECT_EQ(a(r, c), b(r, 10 - c));
}

TEST(FillKernel, Validation) {
  FillKernel k;
  k.weights[0][0] = Rational(-1);
  EXPECT_THROW(k.validate(), PreconditionError);
  FillKernel only_center;
  for (auto& row : only_center.weights) row.fill(Rational(0));
  only_center.weights[1][1] = Rational(1);
  EXPECT_THROW(only_center.validate(), PreconditionError);
}

TEST(FillKernel, CenterIncludedCountsAsZero) {
  // Neighbours 8 and 12 at weight 2, center weight 4 as a zero sample: 40/8 = 5.
  DepthImage img(3, 3, 255, std::uint16_t{0});
  img.samples()[3] = 8;
  img.samples()[5] = 12;
  FillKernel k;
  k.center_included = true;
  EXPECT_EQ(fill_holes(img, k, 1).first(1, 1), 5);
}
