#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "depthgrid/error.hpp"
#include "depthgrid/filters.hpp"
#include "depthgrid/image.hpp"
#include "depthgrid/rational.hpp"

namespace depthgrid {

/// Per-axis uniform sampling layout: known pixels every T, N inserted
/// pixels per interval, D = T / (1 + N) afterwards.
struct GridSpec {
  std::int64_t t_v = 1;
  std::int64_t t_h = 1;
  std::int64_t n_v = 0;
  std::int64_t n_h = 0;

  void validate() const {
    if (t_v < 1 || t_h < 1) throw PreconditionError("sampling interval T must be >= 1");
    if (n_v < 0 || n_h < 0) throw PreconditionError("inserted pixel count N must be >= 0");
  }
  Rational d_v() const { return Rational(t_v, 1 + n_v); }
  Rational d_h() const { return Rational(t_h, 1 + n_h); }
  /// Magnification per axis (1 + N).
  std::int64_t magnification_v() const { return 1 + n_v; }
  std::int64_t magnification_h() const { return 1 + n_h; }
};

/// K(1 + N) - N
inline std::size_t upsampled_extent(std::size_t k, std::size_t n) { return k * (1 + n) - n; }

/// Drops the last row and/or column when the extent is even.
template <typename S>
Image<S> crop_to_odd(const Image<S>& img) {
  const std::size_t w = img.width() % 2 == 0 ? img.width() - 1 : img.width();
  const std::size_t h = img.height() % 2 == 0 ? img.height() - 1 : img.height();
  if (w == img.width() && h == img.height()) return img;
  if (w == 0 || h == 0) throw PreconditionError("cannot crop a 1-pixel-wide even extent to odd");
  std::vector<S> s;
  s.reserve(w * h);
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < w; ++c) s.push_back(img(r, c));
  return Image<S>(w, h, img.max_value(), std::move(s));
}

/// Keeps every `factor`-th pixel starting at index 0 on both axes.
/// Each extent K must satisfy (K - 1) % factor == 0 (odd extents for factor 2)
/// so that upsampling with N = factor - 1 restores the original size.
template <typename S>
Image<S> downsample(const Image<S>& img, std::size_t factor = 2) {
  if (factor < 1) throw PreconditionError("downsample factor must be >= 1");
  if ((img.width() - 1) % factor != 0 || (img.height() - 1) % factor != 0)
    throw PreconditionError("downsample by " + std::to_string(factor) + " needs extents K with (K-1) % " +
                            std::to_string(factor) + " == 0, got " + std::to_string(img.width()) + "x" +
                            std::to_string(img.height()) + "; apply crop_to_odd first");
  const std::size_t w = (img.width() - 1) / factor + 1;
  const std::size_t h = (img.height() - 1) / factor + 1;
  std::vector<S> s;
  s.reserve(w * h);
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < w; ++c) s.push_back(img(r * factor, c * factor));
  return Image<S>(w, h, img.max_value(), std::move(s));
}

/// Filters for the N inserted positions of one interval; entry m-1 serves
/// insertion fraction m / (1 + N).
struct PhaseBank {
  std::vector<FilterSpec> phases;

  std::size_t inserted() const noexcept { return phases.size(); }

  /// N = 1 uses `filter` as given (it must be a half-pel design). For N > 1 the
  /// filter must be a Lagrange design; its tap count is reused at every phase.
  static PhaseBank for_filter(const FilterSpec& filter, std::size_t n) {
    PhaseBank bank;
    if (n == 0) return bank;
    if (n == 1) {
      if (filter.phase() != Rational(1, 2))
        throw PreconditionError("filter/phase mismatch: '" + filter.name() + "' is designed for phase " +
                                filter.phase().str() + ", N = 1 needs 1/2");
      bank.phases.push_back(filter);
      return bank;
    }
    if (!filter.is_lagrange())
      throw PreconditionError("filter/phase mismatch: '" + filter.name() +
                              "' is only defined at half-pel; N > 1 needs a Lagrange-designed filter");
    const auto denom = static_cast<std::int64_t>(n + 1);
    for (std::int64_t m = 1; m <= static_cast<std::int64_t>(n); ++m)
      bank.phases.push_back(grid_adaptive_filter(filter.length(), Rational(m, denom)));
    return bank;
  }
};

namespace detail {

inline std::size_t clamp_index(std::int64_t i, std::size_t n) {
  if (i < 0) return 0;
  if (static_cast<std::size_t>(i) >= n) return n - 1;
  return static_cast<std::size_t>(i);
}

struct DoubleBank {
  std::vector<std::vector<double>> taps;
  std::vector<std::vector<std::int64_t>> offsets;

  explicit DoubleBank(const PhaseBank& bank) {
    for (const auto& f : bank.phases) {
      taps.push_back(f.taps_as_double());
      offsets.emplace_back(f.offsets().begin(), f.offsets().end());
    }
  }
};

inline void upsample_line(std::span<const double> in, const DoubleBank& bank, std::span<double> out) {
  const std::size_t step = bank.taps.size() + 1;
  const std::size_t k = in.size();
  for (std::size_t i = 0; i < k; ++i) {
    out[i * step] = in[i];
    if (i + 1 == k) break;
    for (std::size_t m = 0; m < bank.taps.size(); ++m) {
      double acc = 0.0;
      const auto& t = bank.taps[m];
      const auto& o = bank.offsets[m];
      for (std::size_t j = 0; j < t.size(); ++j)
        acc += t[j] * in[clamp_index(static_cast<std::int64_t>(i) + o[j], k)];
      out[i * step + m + 1] = acc;
    }
  }
}

}  // namespace detail

/// Inserts N samples between each pair of neighbours. Known samples pass
/// through unchanged at positions (1 + N) * i; edges are clamp-replicated.
inline std::vector<double> upsample_1d(std::span<const double> samples, const PhaseBank& bank) {
  if (samples.size() < 2 && bank.inserted() > 0) throw PreconditionError("upsample_1d needs at least 2 samples");
  std::vector<double> out(upsampled_extent(samples.size(), bank.inserted()));
  detail::upsample_line(samples, detail::DoubleBank(bank), out);
  return out;
}

inline std::vector<double> upsample_1d(std::span<const double> samples, const FilterSpec& filter, std::size_t n = 1) {
  return upsample_1d(samples, PhaseBank::for_filter(filter, n));
}

enum class PassOrder { RowsFirst, ColumnsFirst };

namespace detail {

inline RealImage upsample_rows(const RealImage& img, const DoubleBank& bank, std::size_t n) {
  if (n == 0) return img;
  if (img.width() < 2) throw PreconditionError("upsampling needs width >= 2");
  const std::size_t w = upsampled_extent(img.width(), n);
  RealImage out(w, img.height(), img.max_value());
  for (std::size_t r = 0; r < img.height(); ++r)
    upsample_line(img.row(r), bank, out.samples().subspan(r * w, w));
  return out;
}

inline RealImage upsample_cols(const RealImage& img, const DoubleBank& bank, std::size_t n) {
  if (n == 0) return img;
  if (img.height() < 2) throw PreconditionError("upsampling needs height >= 2");
  const std::size_t h = upsampled_extent(img.height(), n);
  RealImage out(img.width(), h, img.max_value());
  std::vector<double> col(img.height());
  std::vector<double> res(h);
  for (std::size_t c = 0; c < img.width(); ++c) {
    for (std::size_t r = 0; r < img.height(); ++r) col[r] = img(r, c);
    upsample_line(col, bank, res);
    for (std::size_t r = 0; r < h; ++r) out(r, c) = res[r];
  }
  return out;
}

}  // namespace detail

/// Separable upsampling of a real-valued image; no rounding or clamping.
inline RealImage upsample(const RealImage& img, const FilterSpec& filter, std::size_t n_v, std::size_t n_h,
                          PassOrder order = PassOrder::RowsFirst) {
  const detail::DoubleBank vbank(PhaseBank::for_filter(filter, n_v));
  const detail::DoubleBank hbank(PhaseBank::for_filter(filter, n_h));
  if (order == PassOrder::RowsFirst)
    return detail::upsample_cols(detail::upsample_rows(img, hbank, n_h), vbank, n_v);
  return detail::upsample_rows(detail::upsample_cols(img, vbank, n_v), hbank, n_h);
}

/// Integer pipeline: real-valued intermediate, rounded half-up and clamped to [0, max_value].
inline DepthImage upsample(const DepthImage& img, const FilterSpec& filter, std::size_t n_v, std::size_t n_h,
                           PassOrder order = PassOrder::RowsFirst) {
  return to_depth(upsample(to_real(img), filter, n_v, n_h, order));
}

/// Direct 2D evaluation of the upsampled image, pixel by pixel, without a
/// separable pass structure. Reference for testing `upsample`.
inline RealImage upsample_bruteforce(const RealImage& img, const FilterSpec& filter, std::size_t n_v,
                                     std::size_t n_h) {
  const PhaseBank vbank = PhaseBank::for_filter(filter, n_v);
  const PhaseBank hbank = PhaseBank::for_filter(filter, n_h);
  const std::size_t kv = img.height();
  const std::size_t kh = img.width();
  if ((n_v > 0 && kv < 2) || (n_h > 0 && kh < 2)) throw PreconditionError("upsampling needs extent >= 2");

  struct Weights {
    std::vector<double> w;
    std::vector<std::int64_t> off;
  };
  // position p -> (source index, weights); phase 0 is a pass-through
  auto weights_for = [](const PhaseBank& bank, std::size_t phase) {
    Weights out;
    if (phase == 0) {
      out.w = {1.0};
      out.off = {0};
    } else {
      const auto& f = bank.phases[phase - 1];
      out.w = f.taps_as_double();
      out.off.assign(f.offsets().begin(), f.offsets().end());
    }
    return out;
  };

  const std::size_t out_h = upsampled_extent(kv, n_v);
  const std::size_t out_w = upsampled_extent(kh, n_h);
  RealImage out(out_w, out_h, img.max_value());
  for (std::size_t y = 0; y < out_h; ++y) {
    const std::size_t i = y / (n_v + 1);
    const Weights wv = weights_for(vbank, y % (n_v + 1));
    for (std::size_t x = 0; x < out_w; ++x) {
      const std::size_t j = x / (n_h + 1);
      const Weights wh = weights_for(hbank, x % (n_h + 1));
      double acc = 0.0;
      for (std::size_t a = 0; a < wv.w.size(); ++a) {
        const std::size_t src_r = detail::clamp_index(static_cast<std::int64_t>(i) + wv.off[a], kv);
        double row_acc = 0.0;
        for (std::size_t b = 0; b < wh.w.size(); ++b)
          row_acc += wh.w[b] * img(src_r, detail::clamp_index(static_cast<std::int64_t>(j) + wh.off[b], kh));
        acc += wv.w[a] * row_acc;
      }
      out(y, x) = acc;
    }
  }
  return out;
}

inline DepthImage upsample_bruteforce(const DepthImage& img, const FilterSpec& filter, std::size_t n_v,
                                      std::size_t n_h) {
  return to_depth(upsample_bruteforce(to_real(img), filter, n_v, n_h));
}

}  // namespace depthgrid
