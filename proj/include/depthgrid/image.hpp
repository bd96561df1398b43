#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "depthgrid/error.hpp"

namespace depthgrid {

/// Row-major 2D grid of depth samples with its peak value I_MAX.
///
/// `Sample` is `std::uint16_t` for the integer pipeline (every sample lies in
/// [0, max_value], checked on construction) or `double` for the real-valued
/// pipeline used in filter-math tests, where no range check is applied.
template <typename Sample>
class Image {
 public:
  using value_type = Sample;

  Image(std::size_t width, std::size_t height, Sample max_value, std::vector<Sample> samples)
      : width_(width), height_(height), max_value_(max_value), samples_(std::move(samples)) {
    if (width_ == 0 || height_ == 0)
      throw PreconditionError("image dimensions must be >= 1 (got " + std::to_string(width_) +
                              "x" + std::to_string(height_) + ")");
    if (samples_.size() != width_ * height_)
      throw PreconditionError("sample count " + std::to_string(samples_.size()) +
                              " does not match " + std::to_string(width_) + "x" +
                              std::to_string(height_));
    if constexpr (std::is_integral_v<Sample>) {
      if (max_value_ == 0) throw PreconditionError("max_value must be >= 1");
      for (std::size_t i = 0; i < samples_.size(); ++i)
        if (samples_[i] > max_value_)
          throw PreconditionError("sample " + std::to_string(i) + " exceeds max_value");
    }
  }

  /// Filled with `fill`.
  Image(std::size_t width, std::size_t height, Sample max_value, Sample fill = Sample{})
      : Image(width, height, max_value, std::vector<Sample>(width * height, fill)) {}

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  std::size_t size() const noexcept { return samples_.size(); }
  Sample max_value() const noexcept { return max_value_; }

  Sample operator()(std::size_t row, std::size_t col) const { return samples_[row * width_ + col]; }
  Sample& operator()(std::size_t row, std::size_t col) { return samples_[row * width_ + col]; }

  std::span<const Sample> samples() const noexcept { return samples_; }
  std::span<Sample> samples() noexcept { return samples_; }
  std::span<const Sample> row(std::size_t r) const { return {samples_.data() + r * width_, width_}; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  Sample max_value_;
  std::vector<Sample> samples_;
};

using DepthImage = Image<std::uint16_t>;
using RealImage = Image<double>;

inline constexpr std::uint16_t kDefaultMaxValue = 255;

/// Rounds half-up and clamps into [0, max_value].
inline std::uint16_t quantize(double v, std::uint16_t max_value) {
  double r = std::floor(v + 0.5);
  if (!(r > 0.0)) return 0;  // also maps NaN to 0
  if (r >= max_value) return max_value;
  return static_cast<std::uint16_t>(r);
}

inline RealImage to_real(const DepthImage& img) {
  std::vector<double> s(img.samples().begin(), img.samples().end());
  return RealImage(img.width(), img.height(), img.max_value(), std::move(s));
}

inline DepthImage to_depth(const RealImage& img) {
  auto maxv = static_cast<std::uint16_t>(std::clamp(img.max_value(), 1.0, 65535.0));
  std::vector<std::uint16_t> s(img.size());
  std::ranges::transform(img.samples(), s.begin(), [&](double v) { return quantize(v, maxv); });
  return DepthImage(img.width(), img.height(), maxv, std::move(s));
}

/// Boolean grid marking invalid pixels; true = hole.
class HoleMask {
 public:
  HoleMask(std::size_t width, std::size_t height) : width_(width), height_(height), flags_(width * height, 0) {}

  std::size_t width() const noexcept { return width_; }
  std::size_t height() const noexcept { return height_; }
  bool operator()(std::size_t row, std::size_t col) const { return flags_[row * width_ + col] != 0; }
  void set(std::size_t row, std::size_t col, bool hole) { flags_[row * width_ + col] = hole ? 1 : 0; }
  std::size_t count() const { return static_cast<std::size_t>(std::ranges::count(flags_, 1)); }
  bool any() const { return std::ranges::find(flags_, 1) != flags_.end(); }

  friend bool operator==(const HoleMask&, const HoleMask&) = default;

 private:
  std::size_t width_;
  std::size_t height_;
  std::vector<std::uint8_t> flags_;
};

// ---------------------------------------------------------------------------
// Synthetic images

struct ConstantPattern {
  double value = 0.0;
};

/// p(v) and q(h) given as ascending coefficient lists (degree <= 3 each),
/// combined additively or multiplicatively.
struct PolynomialPattern {
  std::vector<double> row_coeffs;  // p(v)
  std::vector<double> col_coeffs;  // q(h)
  bool multiplicative = false;
};

/// offset + amplitude * sin(2*pi*f*h) * cos(2*pi*f*v)
struct SinusoidPattern {
  double frequency = 0.0;
  double amplitude = 0.0;
  double offset = 0.0;
};

struct SyntheticSpec {
  std::variant<ConstantPattern, PolynomialPattern, SinusoidPattern> kind;
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::pair<std::size_t, std::size_t>> holes;  // (row, col) zeroed after generation
  std::uint16_t max_value = kDefaultMaxValue;
};

namespace detail {

inline double horner(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + *it;
  return acc;
}

inline double pattern_value(const SyntheticSpec& spec, std::size_t v, std::size_t h) {
  const double dv = static_cast<double>(v);
  const double dh = static_cast<double>(h);
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, ConstantPattern>) {
          return k.value;
        } else if constexpr (std::is_same_v<K, PolynomialPattern>) {
          double p = horner(k.row_coeffs, dv);
          double q = horner(k.col_coeffs, dh);
          return k.multiplicative ? p * q : p + q;
        } else {
          const double w = 2.0 * std::numbers::pi * k.frequency;
          return k.offset + k.amplitude * std::sin(w * dh) * std::cos(w * dv);
        }
      },
      spec.kind);
}

inline void validate(const SyntheticSpec& spec) {
  if (spec.width == 0 || spec.height == 0) throw PreconditionError("synthetic image dimensions must be >= 1");
  if (spec.max_value == 0) throw PreconditionError("max_value must be >= 1");
  if (const auto* p = std::get_if<PolynomialPattern>(&spec.kind))
    if (p->row_coeffs.size() > 4 || p->col_coeffs.size() > 4)
      throw PreconditionError("polynomial pattern degree must be <= 3 per axis");
  for (auto [r, c] : spec.holes)
    if (r >= spec.height || c >= spec.width) throw PreconditionError("hole outside image");
}

}  // namespace detail

/// Real-valued rendering of `spec`, clamped to [0, max_value].
inline RealImage synth_real(const SyntheticSpec& spec) {
  detail::validate(spec);
  const double maxv = spec.max_value;
  RealImage img(spec.width, spec.height, maxv);
  for (std::size_t v = 0; v < spec.height; ++v)
    for (std::size_t h = 0; h < spec.width; ++h)
      img(v, h) = std::clamp(detail::pattern_value(spec, v, h), 0.0, maxv);
  for (auto [r, c] : spec.holes) img(r, c) = 0.0;
  return img;
}

/// Integer rendering of `spec`: real values rounded half-up and clamped.
inline DepthImage synth_image(const SyntheticSpec& spec) { return to_depth(synth_real(spec)); }

}  // namespace depthgrid
