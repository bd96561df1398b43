#pragma once

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "depthgrid/anfis.hpp"
#include "depthgrid/error.hpp"
#include "depthgrid/filters.hpp"
#include "depthgrid/holefill.hpp"
#include "depthgrid/image.hpp"
#include "depthgrid/interp.hpp"
#include "depthgrid/metrics.hpp"
#include "depthgrid/pgm.hpp"

namespace depthgrid::bench {

struct BenchConfig {
  std::vector<FilterKind> filters{kAllFilters.begin(), kAllFilters.end()};
  std::size_t max_fill_passes = 1000;
  /// Score only pixels at least one filter length away from the border.
  bool interior_only = false;
  std::size_t threads = 1;

  void validate() const {
    if (filters.empty()) throw PreconditionError("bench needs at least one filter");
    if (max_fill_passes < 1) throw PreconditionError("max_fill_passes must be >= 1");
  }
};

struct BenchRow {
  std::string image_name;
  std::size_t image_pixels = 0;
  FilterKind filter = FilterKind::Grid4;
  double mse = 0.0;
  double psnr_db = 0.0;
  double wall_time_ms = 0.0;
};

template <typename S>
Region score_region(const Image<S>& reference, const FilterSpec& filter, bool interior_only) {
  return interior_only ? Region::interior(reference, filter.length()) : Region::full(reference);
}

struct PipelineOutcome {
  DepthImage reference;
  DepthImage reconstructed;
  QualityResult quality;
  FillReport fill;
};

/// fill -> crop to odd -> halve -> upsample by 2 -> score against the filled image.
inline PipelineOutcome run_pipeline(const DepthImage& image, const FilterSpec& filter, const BenchConfig& config) {
  auto [filled, report] = fill_holes(image, FillKernel{}, config.max_fill_passes);
  DepthImage reference = crop_to_odd(filled);
  DepthImage reconstructed = upsample(downsample(reference, 2), filter, 1, 1);
  const QualityResult q = psnr(reference, reconstructed, score_region(reference, filter, config.interior_only));
  return {std::move(reference), std::move(reconstructed), q, std::move(report)};
}

/// Real-valued variant without hole filling or quantization, for filter-math checks.
inline QualityResult run_pipeline_real(const RealImage& image, const FilterSpec& filter, const BenchConfig& config) {
  const RealImage reference = crop_to_odd(image);
  const RealImage reconstructed = upsample(downsample(reference, 2), filter, 1, 1);
  return psnr(reference, reconstructed, score_region(reference, filter, config.interior_only));
}

inline BenchRow bench_row(const std::string& name, const DepthImage& image, FilterKind kind, const BenchConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const PipelineOutcome out = run_pipeline(image, builtin_filter(kind), config);
  const auto t1 = std::chrono::steady_clock::now();
  return {name, image.width() * image.height(), kind, out.quality.mse, out.quality.psnr_db,
          std::chrono::duration<double, std::milli>(t1 - t0).count()};
}

// ---------------------------------------------------------------------------
// Published figures for comparison

struct ReferenceEntry {
  const char* image;
  std::size_t width;
  std::size_t height;
  double psnr[4];  // indexed by FilterKind
};

/// Measured PSNR for six Middlebury 2006 depth maps, one column per filter in
/// FilterKind order. Image sizes are the half-resolution Middlebury 2006
/// dimensions; the figures themselves do not state a resolution.
inline constexpr ReferenceEntry kReferenceTable[] = {
    {"Aloe", 641, 555, {39.9108, 40.0318, 40.0684, 40.0846}},
    {"Baby2", 620, 555, {47.109, 47.2672, 47.2149, 47.2845}},
    {"Baby3", 656, 555, {47.1809, 47.4044, 47.2218, 47.4055}},
    {"Bowling2", 665, 555, {44.2, 44.4352, 44.3577, 44.4295}},
    {"Cloth1", 626, 555, {47.6444, 47.7766, 47.7397, 47.8162}},
    {"Cloth3", 626, 555, {49.6144, 49.7569, 49.6258, 49.7836}},
};

inline std::string name_key(std::string_view name) {
  std::string k;
  for (char c : name)
    if (std::isalnum(static_cast<unsigned char>(c))) k.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (k == "cloth") k = "cloth1";
  return k;
}

inline const ReferenceEntry* find_reference(std::string_view image_name) {
  const std::string key = name_key(image_name);
  for (const auto& e : kReferenceTable)
    if (name_key(e.image) == key) return &e;
  return nullptr;
}

/// The reference figures as 24 bench rows (mse derived from PSNR, I_MAX 255).
inline std::vector<BenchRow> reference_rows() {
  std::vector<BenchRow> rows;
  for (const auto& e : kReferenceTable)
    for (auto k : kAllFilters) {
      const double p = e.psnr[static_cast<int>(k)];
      rows.push_back({e.image, e.width * e.height, k, 255.0 * 255.0 / std::pow(10.0, p / 10.0), p, 0.0});
    }
  return rows;
}

// ---------------------------------------------------------------------------
// Suite

struct ImageError {
  std::string image_name;
  std::string message;
};

struct Deviation {
  std::string image_name;
  FilterKind filter;
  double measured_db;
  double reference_db;
};

struct Summary {
  std::map<FilterKind, double> mean_psnr;   // over finite PSNRs
  std::map<FilterKind, std::size_t> finite_count;
  std::map<std::string, FilterKind> winner;  // per image, highest PSNR
  std::vector<Deviation> deviations;         // images that appear in the reference table
};

struct SuiteResult {
  std::vector<BenchRow> rows;
  std::vector<ImageError> errors;
  Summary summary;
};

inline void sort_rows(std::vector<BenchRow>& rows) {
  std::ranges::sort(rows, [](const BenchRow& a, const BenchRow& b) {
    if (a.image_name != b.image_name) return a.image_name < b.image_name;
    return static_cast<int>(a.filter) < static_cast<int>(b.filter);
  });
}

inline Summary summarize(const std::vector<BenchRow>& rows) {
  Summary s;
  std::map<FilterKind, double> sum;
  std::map<std::string, double> best;
  for (const auto& r : rows) {
    if (std::isfinite(r.psnr_db)) {
      sum[r.filter] += r.psnr_db;
      ++s.finite_count[r.filter];
    }
    auto it = best.find(r.image_name);
    if (it == best.end() || r.psnr_db > it->second) {
      best[r.image_name] = r.psnr_db;
      s.winner[r.image_name] = r.filter;
    }
    if (const auto* ref = find_reference(r.image_name))
      s.deviations.push_back({r.image_name, r.filter, r.psnr_db, ref->psnr[static_cast<int>(r.filter)]});
  }
  for (const auto& [k, v] : sum) s.mean_psnr[k] = v / static_cast<double>(s.finite_count[k]);
  return s;
}

/// Benchmarks every *.pgm in `dir` against every configured filter. Images
/// that fail to load are reported in `errors`; the rest still run.
inline SuiteResult run_suite(const std::filesystem::path& dir, const BenchConfig& config) {
  config.validate();
  if (!std::filesystem::is_directory(dir)) throw IoError(dir.string(), "not a directory");
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    auto ext = e.path().extension().string();
    std::ranges::transform(ext, ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (e.is_regular_file() && ext == ".pgm") files.push_back(e.path());
  }
  if (files.empty()) throw IoError(dir.string(), "no .pgm images found");
  std::ranges::sort(files);

  SuiteResult result;
  std::mutex mu;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      const std::string name = files[i].stem().string();
      try {
        const DepthImage img = load_pgm(files[i]);
        std::vector<BenchRow> local;
        for (auto k : config.filters) local.push_back(bench_row(name, img, k, config));
        std::lock_guard lock(mu);
        result.rows.insert(result.rows.end(), local.begin(), local.end());
      } catch (const Error& e) {
        std::lock_guard lock(mu);
        result.errors.push_back({name, e.what()});
      }
    }
  };
  const std::size_t n_threads = std::clamp<std::size_t>(config.threads, 1, files.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  sort_rows(result.rows);
  std::ranges::sort(result.errors, {}, &ImageError::image_name);
  result.summary = summarize(result.rows);
  return result;
}

// ---------------------------------------------------------------------------
// Reports

enum class TableFormat { Csv, Markdown };

inline std::string format_psnr(double db) {
  if (std::isinf(db)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", db);
  return buf;
}

inline std::string format_double(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

/// Shortest text that parses back to exactly `v`.
inline std::string format_exact(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline constexpr const char* kCsvHeader = "image,pixels,filter,mse,psnr_db,wall_time_ms";

inline std::string export_table(const std::vector<BenchRow>& rows, TableFormat format) {
  std::ostringstream os;
  if (format == TableFormat::Csv) {
    os << kCsvHeader << '\n';
    for (const auto& r : rows)
      os << r.image_name << ',' << r.image_pixels << ',' << filter_name(r.filter) << ','
         << format_exact(r.mse) << ',' << format_psnr(r.psnr_db) << ','
         << format_double(r.wall_time_ms, "%.3f") << '\n';
    return os.str();
  }
  std::vector<FilterKind> kinds;
  std::vector<std::string> images;
  for (const auto& r : rows) {
    if (std::ranges::find(kinds, r.filter) == kinds.end()) kinds.push_back(r.filter);
    if (std::ranges::find(images, r.image_name) == images.end()) images.push_back(r.image_name);
  }
  std::ranges::sort(kinds, {}, [](FilterKind k) { return static_cast<int>(k); });
  os << "| Depth image |";
  for (auto k : kinds) os << ' ' << filter_label(k) << " |";
  os << "\n|---|";
  for (std::size_t i = 0; i < kinds.size(); ++i) os << "---:|";
  os << '\n';
  for (const auto& img : images) {
    os << "| " << img << " |";
    for (auto k : kinds) {
      auto it = std::ranges::find_if(rows, [&](const BenchRow& r) { return r.image_name == img && r.filter == k; });
      os << ' ' << (it == rows.end() ? std::string("-") : format_psnr(it->psnr_db)) << " |";
    }
    os << '\n';
  }
  return os.str();
}

inline std::vector<BenchRow> parse_table_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t offset = 0;
  if (!std::getline(in, line) || line != kCsvHeader)
    throw ParseError(ParseError::Kind::MalformedHeader, 0, "expected CSV header '" + std::string(kCsvHeader) + "'");
  offset += line.size() + 1;
  std::vector<BenchRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) {
      offset += 1;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    if (f.size() != 6) throw ParseError(ParseError::Kind::BadRecord, offset, "expected 6 fields");
    auto kind = parse_filter_kind(f[2]);
    if (!kind) throw ParseError(ParseError::Kind::BadRecord, offset, "unknown filter '" + f[2] + "'");
    try {
      rows.push_back({f[0], std::stoull(f[1]), *kind, std::stod(f[3]), std::stod(f[4]), std::stod(f[5])});
    } catch (const std::logic_error&) {
      throw ParseError(ParseError::Kind::BadRecord, offset, "non-numeric field");
    }
    offset += line.size() + 1;
  }
  return rows;
}

/// CSV columns image..psnr_db, i.e. everything but the timing column.
inline std::string strip_timing(const std::string& csv) {
  std::istringstream in(csv);
  std::ostringstream out;
  for (std::string line; std::getline(in, line);) out << line.substr(0, line.rfind(',')) << '\n';
  return out.str();
}

// ---------------------------------------------------------------------------
// Fuzzy-model training data

inline std::vector<anfis::Sample> anfis_samples(const std::vector<BenchRow>& rows) {
  std::vector<anfis::Sample> out;
  for (const auto& r : rows)
    if (std::isfinite(r.psnr_db))
      out.push_back({{static_cast<double>(r.image_pixels), static_cast<double>(filter_id(r.filter))}, r.psnr_db});
  if (out.empty()) throw PreconditionError("no rows with finite PSNR");
  return out;
}

/// Inputs (pixel count, filter id), target PSNR, min-max normalized.
inline anfis::Dataset build_anfis_dataset(const std::vector<BenchRow>& rows) {
  return anfis::Dataset::normalized(anfis_samples(rows));
}

inline const std::vector<std::string>& anfis_input_names() {
  static const std::vector<std::string> names{"pixels", "filter_id"};
  return names;
}

inline constexpr const char* kDatasetHeader = "pixels,filter_id,psnr_db";

inline std::string dataset_csv(const std::vector<anfis::Sample>& raw) {
  std::ostringstream os;
  os << kDatasetHeader << '\n';
  for (const auto& s : raw)
    os << format_exact(s.x[0]) << ',' << format_exact(s.x[1]) << ',' << format_exact(s.y) << '\n';
  return os.str();
}

inline std::vector<anfis::Sample> parse_dataset_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kDatasetHeader)
    throw ParseError(ParseError::Kind::MalformedHeader, 0, "expected CSV header '" + std::string(kDatasetHeader) + "'");
  std::size_t offset = line.size() + 1;
  std::vector<anfis::Sample> out;
  while (std::getline(in, line)) {
    if (!line.empty()) {
      std::vector<double> v;
      std::stringstream ls(line);
      try {
        for (std::string cell; std::getline(ls, cell, ',');) v.push_back(std::stod(cell));
      } catch (const std::logic_error&) {
        throw ParseError(ParseError::Kind::BadRecord, offset, "non-numeric field");
      }
      if (v.size() != 3) throw ParseError(ParseError::Kind::BadRecord, offset, "expected 3 fields");
      out.push_back({{v[0], v[1]}, v[2]});
    }
    offset += line.size() + 1;
  }
  return out;
}

}  // namespace depthgrid::bench
