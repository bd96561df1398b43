#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

using namespace depthgrid;

namespace {
std::vector<Rational> R(std::initializer_list<std::pair<std::int64_t, std::int64_t>> v) {
  std::vector<Rational> out;
  for (auto [n, d] : v) out.emplace_back(n, d);
  return out;
}
}  // namespace

TEST(Lagrange, LinearMidpoint) {
  EXPECT_EQ(lagrange_coefficients({0, 1}, Rational(1, 2)), R({{1, 2}, {1, 2}}));
}

TEST(Lagrange, FourTapHalfPel) {
  EXPECT_EQ(lagrange_coefficients({-1, 0, 1, 2}, Rational(1, 2)), R({{-1, 16}, {9, 16}, {9, 16}, {-1, 16}}));
}

TEST(Lagrange, SixTapHalfPel) {
  EXPECT_EQ(lagrange_coefficients({-2, -1, 0, 1, 2, 3}, Rational(1, 2)),
            R({{3, 256}, {-25, 256}, {150, 256}, {150, 256}, {-25, 256}, {3, 256}}));
}

TEST(Lagrange, OffCenterPhases) {
  EXPECT_EQ(lagrange_coefficients({-1, 0, 1, 2}, Rational(1, 4)), R({{-7, 128}, {105, 128}, {35, 128}, {-5, 128}}));
  EXPECT_EQ(lagrange_coefficients({-1, 0, 1, 2}, Rational(1, 3)), R({{-5, 81}, {20, 27}, {10, 27}, {-4, 81}}));
}

TEST(Lagrange, Preconditions) {
  EXPECT_THROW(lagrange_coefficients({0}, Rational(1, 2)), PreconditionError);
  EXPECT_THROW(lagrange_coefficients({0, 0, 1}, Rational(1, 2)), PreconditionError);
  EXPECT_THROW(lagrange_coefficients({0, 1}, Rational(1)), PreconditionError);
  EXPECT_THROW(lagrange_coefficients({0, 1}, Rational(-1, 2)), PreconditionError);
}

TEST(Lagrange, ReproducesPolynomialsExactly) {
  // sum_j c_j * p(node_j) == p(x) for every p of degree < node count.
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t half = 1 + rng() % 3;
    std::vector<std::int64_t> nodes;
    for (std::int64_t n = -static_cast<std::int64_t>(half) + 1; n <= static_cast<std::int64_t>(half); ++n)
      nodes.push_back(n);
    const Rational x(static_cast<std::int64_t>(1 + rng() % 6), 7);
    const auto c = lagrange_coefficients(nodes, x);
    std::vector<Rational> poly;
    for (std::size_t d = 0; d < nodes.size(); ++d) poly.emplace_back(static_cast<std::int64_t>(rng() % 11) - 5);
    auto eval = [&](const Rational& t) {
      Rational acc(0);
      for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * t + *it;
      return acc;
    };
    Rational sum(0);
    for (std::size_t j = 0; j < nodes.size(); ++j) sum += c[j] * eval(Rational(nodes[j]));
    ASSERT_EQ(sum, eval(x));
  }
}

TEST(Lagrange, HalfPelIsPalindromic) {
  for (std::size_t taps = 2; taps <= 8; taps += 2) {
    const auto f = grid_adaptive_filter(taps, Rational(1, 2));
    for (std::size_t i = 0; i < taps; ++i) EXPECT_EQ(f.taps()[i], f.taps()[taps - 1 - i]);
  }
}

TEST(Builtin, TapsAndOffsets) {
  const auto lin = builtin_filter(FilterKind::LinearAverage);
  EXPECT_EQ(std::vector<Rational>(lin.taps().begin(), lin.taps().end()), R({{1, 2}, {1, 2}}));
  EXPECT_EQ(lin.offsets()[0], 0);
  const auto avs = builtin_filter(FilterKind::Avs4);
  EXPECT_EQ(std::vector<Rational>(avs.taps().begin(), avs.taps().end()), R({{-1, 8}, {5, 8}, {5, 8}, {-1, 8}}));
  EXPECT_EQ(avs.offsets()[0], -1);
  const auto h = builtin_filter(FilterKind::H264_6);
  EXPECT_EQ(std::vector<Rational>(h.taps().begin(), h.taps().end()),
            R({{1, 32}, {-5, 32}, {20, 32}, {20, 32}, {-5, 32}, {1, 32}}));
  EXPECT_EQ(h.offsets()[0], -2);
  EXPECT_EQ(h.offsets()[5], 3);
  const auto g = builtin_filter(FilterKind::Grid4);
  EXPECT_EQ(std::vector<Rational>(g.taps().begin(), g.taps().end()), R({{-1, 16}, {9, 16}, {9, 16}, {-1, 16}}));
}

TEST(Builtin, UnityDcGain) {
  for (auto k : kAllFilters) EXPECT_EQ(dc_gain(builtin_filter(k)), Rational(1)) << filter_name(k);
}

TEST(Builtin, GridFilterMatchesLagrangeDesign) {
  EXPECT_EQ(builtin_filter(FilterKind::Grid4).taps()[1], grid_adaptive_filter(4, Rational(1, 2)).taps()[1]);
  EXPECT_TRUE(builtin_filter(FilterKind::Grid4).is_lagrange());
  EXPECT_TRUE(builtin_filter(FilterKind::LinearAverage).is_lagrange());
  EXPECT_FALSE(builtin_filter(FilterKind::Avs4).is_lagrange());
  EXPECT_FALSE(builtin_filter(FilterKind::H264_6).is_lagrange());
}

TEST(Builtin, NamesAndIds) {
  EXPECT_EQ(filter_id(FilterKind::Grid4), 1);
  EXPECT_EQ(filter_id(FilterKind::LinearAverage), 2);
  EXPECT_EQ(filter_id(FilterKind::Avs4), 3);
  EXPECT_EQ(filter_id(FilterKind::H264_6), 4);
  for (auto k : kAllFilters) EXPECT_EQ(parse_filter_kind(filter_name(k)), k);
  EXPECT_FALSE(parse_filter_kind("bicubic").has_value());
}

TEST(FilterSpecInvariant, BrokenSignsRejected) {
  const auto broken = R({{-1, 32}, {-5, 32}, {20, 32}, {20, 32}, {-5, 32}, {1, 32}});
  EXPECT_EQ(dc_gain(broken), Rational(15, 16));
  static constexpr std::int64_t t[] = {-1, -5, 20, 20, -5, 1};
  EXPECT_THROW(FilterSpec::from_integers("broken", t, 32, -2), PreconditionError);
}

TEST(FilterSpecInvariant, ShapeChecks) {
  EXPECT_THROW(FilterSpec("one", R({{1, 1}}), {0}), PreconditionError);
  EXPECT_THROW(FilterSpec("gap", R({{1, 2}, {1, 2}}), {0, 2}), PreconditionError);
  EXPECT_THROW(FilterSpec("len", R({{1, 2}, {1, 2}}), {0}), PreconditionError);
  EXPECT_THROW(FilterSpec("phase", R({{1, 2}, {1, 2}}), {0, 1}, Rational(1)), PreconditionError);
}
