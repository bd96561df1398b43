#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <utility>
#include <vector>

#include "depthgrid/error.hpp"
#include "depthgrid/image.hpp"
#include "depthgrid/rational.hpp"

namespace depthgrid {

/// 3x3 weighting used to average the valid neighbours of a hole.
struct FillKernel {
  std::array<std::array<Rational, 3>, 3> weights{{{1, 2, 1}, {2, 4, 2}, {1, 2, 1}}};
  /// When set, the hole itself takes part in the average as a zero sample.
  bool center_included = false;

  void validate() const {
    bool any_off_center = false;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        if (weights[r][c] < Rational(0)) throw PreconditionError("fill kernel weights must be non-negative");
        if ((r != 1 || c != 1) && weights[r][c] != Rational(0)) any_off_center = true;
      }
    if (!any_off_center) throw PreconditionError("fill kernel needs a nonzero off-center weight");
  }
};

struct FillReport {
  std::size_t passes_run = 0;
  std::size_t holes_initial = 0;
  std::size_t holes_remaining = 0;
  std::vector<std::size_t> per_pass_filled;
};

inline HoleMask detect_holes(const DepthImage& image) {
  HoleMask mask(image.width(), image.height());
  for (std::size_t r = 0; r < image.height(); ++r)
    for (std::size_t c = 0; c < image.width(); ++c)
      if (image(r, c) == 0) mask.set(r, c, true);
  return mask;
}

/// Fills zero-valued pixels with the kernel-weighted mean of their non-hole
/// neighbours, rounded half-up.
///
/// Every pass reads only the previous pass's grid, so the result does not
/// depend on scan order. A hole with no valid neighbour waits for a later
/// pass. Iteration stops when no holes remain, a pass fills nothing, or
/// `max_passes` is reached.
inline std::pair<DepthImage, FillReport> fill_holes(const DepthImage& image, const FillKernel& kernel = {},
                                                    std::size_t max_passes = 1000) {
  if (max_passes < 1) throw PreconditionError("max_passes must be >= 1");
  kernel.validate();

  // Bring the weights to a common denominator so the average is exact in integers.
  std::int64_t lcm = 1;
  for (const auto& row : kernel.weights)
    for (const auto& w : row) lcm = std::lcm(lcm, w.den());
  std::array<std::array<std::int64_t, 3>, 3> iw{};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) iw[r][c] = (kernel.weights[r][c] * Rational(lcm)).num();
  const std::int64_t center_weight = kernel.center_included ? iw[1][1] : 0;

  const std::size_t W = image.width();
  const std::size_t H = image.height();
  std::vector<std::size_t> holes;
  for (std::size_t i = 0; i < image.size(); ++i)
    if (image.samples()[i] == 0) holes.push_back(i);

  FillReport report;
  report.holes_initial = holes.size();
  DepthImage current = image;

  while (!holes.empty() && report.passes_run < max_passes) {
    DepthImage next = current;
    std::vector<std::size_t> still;
    std::size_t filled = 0;
    for (std::size_t idx : holes) {
      const std::size_t r = idx / W;
      const std::size_t c = idx % W;
      wide_int num = 0;
      wide_int den = 0;
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          const auto rr = static_cast<std::ptrdiff_t>(r) + dr;
          const auto cc = static_cast<std::ptrdiff_t>(c) + dc;
          if (rr < 0 || cc < 0 || rr >= static_cast<std::ptrdiff_t>(H) || cc >= static_cast<std::ptrdiff_t>(W))
            continue;
          const std::uint16_t v = current(static_cast<std::size_t>(rr), static_cast<std::size_t>(cc));
          const std::int64_t w = iw[dr + 1][dc + 1];
          if (v == 0 || w == 0) continue;
          num += static_cast<wide_int>(w) * v;
          den += w;
        }
      }
      if (den == 0) {
        still.push_back(idx);
        continue;
      }
      den += center_weight;
      // round half-up of num/den, both non-negative
      const auto value = static_cast<std::uint16_t>((2 * num + den) / (2 * den));
      if (value == 0) {
        // only reachable with center_included; the pixel is still a hole
        still.push_back(idx);
        continue;
      }
      next.samples()[idx] = value;
      ++filled;
    }
    ++report.passes_run;
    report.per_pass_filled.push_back(filled);
    current = std::move(next);
    holes = std::move(still);
    if (filled == 0) break;
  }
  report.holes_remaining = holes.size();
  return {std::move(current), std::move(report)};
}

}  // namespace depthgrid
