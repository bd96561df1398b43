#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

#include "depthgrid/error.hpp"
#include "depthgrid/image.hpp"

namespace depthgrid {

struct QualityResult {
  double mse = 0.0;
  /// +infinity when mse == 0.
  double psnr_db = std::numeric_limits<double>::infinity();
  double max_value = 0.0;

  bool perfect() const noexcept { return std::isinf(psnr_db); }
};

/// Rectangle [row0, row0 + rows) x [col0, col0 + cols).
struct Region {
  std::size_t row0 = 0;
  std::size_t col0 = 0;
  std::size_t rows = 0;
  std::size_t cols = 0;

  template <typename S>
  static Region full(const Image<S>& img) {
    return {0, 0, img.height(), img.width()};
  }

  /// The image minus a border of `border` pixels on every side.
  template <typename S>
  static Region interior(const Image<S>& img, std::size_t border) {
    if (2 * border >= img.height() || 2 * border >= img.width())
      throw PreconditionError("border " + std::to_string(border) + " leaves no interior");
    return {border, border, img.height() - 2 * border, img.width() - 2 * border};
  }
};

inline double psnr_from_mse(double mse, double max_value) {
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(max_value * max_value / mse);
}

/// Mean squared difference over `region`, accumulated in long double.
template <typename A, typename B>
double mse(const Image<A>& reference, const Image<B>& test, const Region& region) {
  if (reference.width() != test.width() || reference.height() != test.height())
    throw PreconditionError("mse: dimension mismatch (" + std::to_string(reference.width()) + "x" +
                            std::to_string(reference.height()) + " vs " + std::to_string(test.width()) + "x" +
                            std::to_string(test.height()) + ")");
  if (region.rows == 0 || region.cols == 0 || region.row0 + region.rows > reference.height() ||
      region.col0 + region.cols > reference.width())
    throw PreconditionError("mse: region outside image");
  long double acc = 0.0L;
  for (std::size_t r = region.row0; r < region.row0 + region.rows; ++r)
    for (std::size_t c = region.col0; c < region.col0 + region.cols; ++c) {
      const long double d = static_cast<long double>(reference(r, c)) - static_cast<long double>(test(r, c));
      acc += d * d;
    }
  return static_cast<double>(acc / static_cast<long double>(region.rows * region.cols));
}

template <typename A, typename B>
double mse(const Image<A>& reference, const Image<B>& test) {
  return mse(reference, test, Region::full(reference));
}

/// PSNR with I_MAX taken from the reference image.
template <typename S>
QualityResult psnr(const Image<S>& reference, const Image<S>& test, const Region& region) {
  if (reference.max_value() != test.max_value())
    throw PreconditionError("psnr: max_value mismatch");
  QualityResult q;
  q.mse = mse(reference, test, region);
  q.max_value = static_cast<double>(reference.max_value());
  q.psnr_db = psnr_from_mse(q.mse, q.max_value);
  return q;
}

template <typename S>
QualityResult psnr(const Image<S>& reference, const Image<S>& test) {
  return psnr(reference, test, Region::full(reference));
}

}  // namespace depthgrid
