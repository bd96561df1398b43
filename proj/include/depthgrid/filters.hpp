#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "depthgrid/error.hpp"
#include "depthgrid/rational.hpp"

namespace depthgrid {

/// Lagrange basis values L_k(x) = prod_{j != k} (x - n_j) / (n_k - n_j) at
/// the query point, one per node. These are the taps of the FIR filter that
/// interpolates exactly every polynomial of degree < nodes.size().
inline std::vector<Rational> lagrange_coefficients(std::span<const std::int64_t> nodes, const Rational& x) {
  if (nodes.size() < 2) throw PreconditionError("lagrange_coefficients needs at least 2 nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i + 1; j < nodes.size(); ++j)
      if (nodes[i] == nodes[j])
        throw PreconditionError("duplicate Lagrange node " + std::to_string(nodes[i]));
  const auto [lo, hi] = std::ranges::minmax(nodes);
  if (!(x > Rational(lo) && x < Rational(hi)))
    throw PreconditionError("query point " + x.str() + " outside (" + std::to_string(lo) + ", " +
                            std::to_string(hi) + ")");

  std::vector<Rational> out;
  out.reserve(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    Rational l(1);
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (j == k) continue;
      l *= (x - Rational(nodes[j])) / Rational(nodes[k] - nodes[j]);
    }
    out.push_back(l);
  }
  return out;
}

inline std::vector<Rational> lagrange_coefficients(std::initializer_list<std::int64_t> nodes, const Rational& x) {
  return lagrange_coefficients(std::span<const std::int64_t>(nodes.begin(), nodes.size()), x);
}

inline Rational dc_gain(std::span<const Rational> taps) {
  Rational s(0);
  for (const auto& t : taps) s += t;
  return s;
}

/// Symmetric-support FIR interpolation filter for one insertion phase.
///
/// `offsets[k]` is the position of tap k relative to the known sample to the
/// left of the insertion point; `phase` is the insertion point's fractional
/// distance from that sample (1/2 for half-pel).
class FilterSpec {
 public:
  FilterSpec(std::string name, std::vector<Rational> taps, std::vector<std::int64_t> offsets,
             Rational phase = Rational(1, 2))
      : name_(std::move(name)), taps_(std::move(taps)), offsets_(std::move(offsets)), phase_(phase) {
    if (taps_.size() < 2 || taps_.size() != offsets_.size())
      throw PreconditionError("filter '" + name_ + "': taps and offsets must have equal length >= 2");
    for (std::size_t i = 1; i < offsets_.size(); ++i)
      if (offsets_[i] != offsets_[i - 1] + 1)
        throw PreconditionError("filter '" + name_ + "': offsets must be consecutive integers");
    if (const auto g = dc_gain(taps_); g != Rational(1))
      throw PreconditionError("filter '" + name_ + "': DC gain is " + g.str() + ", expected 1");
    if (!(phase_ > Rational(0) && phase_ < Rational(1)))
      throw PreconditionError("filter '" + name_ + "': phase must lie in (0, 1)");
  }

  /// Builds taps from integer numerators over a common denominator.
  static FilterSpec from_integers(std::string name, std::span<const std::int64_t> numerators,
                                  std::int64_t denominator, std::int64_t first_offset,
                                  Rational phase = Rational(1, 2)) {
    std::vector<Rational> taps;
    std::vector<std::int64_t> offsets;
    for (std::size_t i = 0; i < numerators.size(); ++i) {
      taps.emplace_back(numerators[i], denominator);
      offsets.push_back(first_offset + static_cast<std::int64_t>(i));
    }
    return FilterSpec(std::move(name), std::move(taps), std::move(offsets), phase);
  }

  const std::string& name() const noexcept { return name_; }
  std::span<const Rational> taps() const noexcept { return taps_; }
  std::span<const std::int64_t> offsets() const noexcept { return offsets_; }
  const Rational& phase() const noexcept { return phase_; }
  std::size_t length() const noexcept { return taps_.size(); }

  std::vector<double> taps_as_double() const {
    std::vector<double> out;
    for (const auto& t : taps_) out.push_back(t.to_double());
    return out;
  }

  /// True when the taps coincide with the Lagrange design over the same offsets and phase.
  bool is_lagrange() const {
    return std::ranges::equal(taps_, lagrange_coefficients(offsets_, phase_));
  }

  friend bool operator==(const FilterSpec& a, const FilterSpec& b) {
    return a.taps_ == b.taps_ && a.offsets_ == b.offsets_ && a.phase_ == b.phase_;
  }

 private:
  std::string name_;
  std::vector<Rational> taps_;
  std::vector<std::int64_t> offsets_;
  Rational phase_;
};

inline Rational dc_gain(const FilterSpec& f) { return dc_gain(f.taps()); }

/// The four half-pel filters compared in the benchmark, in report column order.
enum class FilterKind { LinearAverage, Avs4, H264_6, Grid4 };

inline constexpr std::array<FilterKind, 4> kAllFilters{FilterKind::LinearAverage, FilterKind::Avs4,
                                                       FilterKind::H264_6, FilterKind::Grid4};

inline std::string_view filter_name(FilterKind k) {
  switch (k) {
    case FilterKind::LinearAverage: return "linear_average";
    case FilterKind::Avs4: return "avs4";
    case FilterKind::H264_6: return "h264_6";
    case FilterKind::Grid4: return "grid4";
  }
  return "?";
}

inline std::string_view filter_label(FilterKind k) {
  switch (k) {
    case FilterKind::LinearAverage: return "Linear Average";
    case FilterKind::Avs4: return "AVS 4-tap";
    case FilterKind::H264_6: return "H.264 6-tap";
    case FilterKind::Grid4: return "Grid-adaptive 4-tap";
  }
  return "?";
}

/// Categorical code used as the numeric "filter" input of the fuzzy model.
inline int filter_id(FilterKind k) {
  switch (k) {
    case FilterKind::Grid4: return 1;
    case FilterKind::LinearAverage: return 2;
    case FilterKind::Avs4: return 3;
    case FilterKind::H264_6: return 4;
  }
  return 0;
}

inline std::optional<FilterKind> parse_filter_kind(std::string_view name) {
  for (auto k : kAllFilters)
    if (filter_name(k) == name) return k;
  return std::nullopt;
}

inline FilterSpec builtin_filter(FilterKind kind) {
  switch (kind) {
    case FilterKind::LinearAverage: {
      static constexpr std::int64_t t[] = {1, 1};
      return FilterSpec::from_integers("linear_average", t, 2, 0);
    }
    case FilterKind::Avs4: {
      static constexpr std::int64_t t[] = {-1, 5, 5, -1};
      return FilterSpec::from_integers("avs4", t, 8, -1);
    }
    case FilterKind::H264_6: {
      static constexpr std::int64_t t[] = {1, -5, 20, 20, -5, 1};
      return FilterSpec::from_integers("h264_6", t, 32, -2);
    }
    case FilterKind::Grid4: {
      static constexpr std::int64_t t[] = {-1, 9, 9, -1};
      return FilterSpec::from_integers("grid4", t, 16, -1);
    }
  }
  throw PreconditionError("unknown filter kind");
}

/// Grid-adaptive design: a `taps`-tap Lagrange filter on nodes [-L+1 .. L]
/// (taps = 2L) evaluated at the insertion fraction `phase`.
inline FilterSpec grid_adaptive_filter(std::size_t taps, const Rational& phase) {
  if (taps < 2 || taps % 2 != 0) throw PreconditionError("tap count must be even and >= 2");
  const auto half = static_cast<std::int64_t>(taps / 2);
  std::vector<std::int64_t> nodes;
  for (std::int64_t n = -half + 1; n <= half; ++n) nodes.push_back(n);
  auto coeffs = lagrange_coefficients(nodes, phase);
  return FilterSpec("lagrange" + std::to_string(taps) + "@" + phase.str(), std::move(coeffs), std::move(nodes),
                    phase);
}

}  // namespace depthgrid
