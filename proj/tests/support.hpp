#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "depthgrid/depthgrid.hpp"

namespace depthgrid::testing {

inline RealImage random_real(std::mt19937_64& rng, std::size_t w, std::size_t h, double lo = 0.0, double hi = 255.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> s(w * h);
  for (auto& v : s) v = d(rng);
  return RealImage(w, h, 255.0, std::move(s));
}

inline DepthImage random_depth(std::mt19937_64& rng, std::size_t w, std::size_t h, std::uint16_t lo = 1,
                               std::uint16_t hi = 255) {
  std::uniform_int_distribution<int> d(lo, hi);
  std::vector<std::uint16_t> s(w * h);
  for (auto& v : s) v = static_cast<std::uint16_t>(d(rng));
  return DepthImage(w, h, 255, std::move(s));
}

/// Separable cubic p(v) + q(h) sampled without quantization.
inline RealImage cubic_real(std::size_t w, std::size_t h) {
  SyntheticSpec spec{PolynomialPattern{{20.0, 0.9, 0.01, -0.0002}, {30.0, -0.5, 0.03, -0.0004}}, w, h, {}, 255};
  return synth_real(spec);
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("depthgrid_" + tag + "_" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace depthgrid::testing
