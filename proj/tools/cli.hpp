#pragma once

// Command-line front end: fill / filter / interp / psnr / bench / anfis.
// Machine-readable payloads go to `out`, diagnostics to `err`.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "depthgrid/depthgrid.hpp"

namespace depthgrid::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kNumeric = 3 };

namespace detail {

using nlohmann::json;

/// Raised for bad argument values that CLI11 itself cannot check.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline json psnr_json(double db) { return std::isinf(db) ? json("inf") : json(db); }

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError(p.string(), "cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(p.string(), "cannot open for writing");
  out << text;
  if (!out) throw IoError(p.string(), "write failed");
}

inline FilterKind filter_arg(const std::string& name) {
  auto k = parse_filter_kind(name);
  if (!k) throw UsageError("unknown filter '" + name + "' (expected linear_average, avs4, h264_6 or grid4)");
  return *k;
}

inline PgmFormat format_arg(const std::string& s) {
  if (s == "p2" || s == "P2") return PgmFormat::Plain;
  if (s == "p5" || s == "P5") return PgmFormat::Binary;
  throw UsageError("unknown PGM format '" + s + "' (expected p2 or p5)");
}

inline json filter_json(const FilterSpec& f) {
  json taps = json::array();
  for (const auto& t : f.taps()) taps.push_back(t.str());
  return {{"name", f.name()},
          {"taps", taps},
          {"offsets", std::vector<std::int64_t>(f.offsets().begin(), f.offsets().end())},
          {"phase", f.phase().str()},
          {"dc_gain", dc_gain(f).str()}};
}

inline std::size_t env_threads(std::size_t fallback) {
  if (const char* v = std::getenv("DEPTHGRID_THREADS")) {
    char* end = nullptr;
    const unsigned long n = std::strtoul(v, &end, 10);
    if (end != v && *end == '\0' && n > 0) return n;
  }
  return fallback;
}

struct Options {
  // fill / interp / psnr
  std::string in, out, ref, test, filter = "grid4", format = "p5";
  std::size_t max_passes = 1000, n = 1, interior = 0;
  // filter design
  std::size_t taps = 4;
  std::string phase = "1/2";
  // bench
  std::string dir, filters, emit_anfis, table_format = "csv";
  bool interior_only = false;
  std::size_t threads = 0;
  // anfis
  std::string data, model;
  std::size_t rules = 9, epochs = 50, steps = 21;
  std::uint64_t seed = 0;
  double lr = 0.01, holdout = 0.0;
};

inline void cmd_fill(const Options& o, std::ostream& out) {
  const DepthImage img = load_pgm(o.in);
  if (o.max_passes < 1) throw UsageError("--max-passes must be >= 1");
  auto [filled, report] = fill_holes(img, FillKernel{}, o.max_passes);
  save_pgm(filled, o.out, format_arg(o.format));
  out << json{{"passes_run", report.passes_run},
              {"holes_initial", report.holes_initial},
              {"holes_remaining", report.holes_remaining},
              {"per_pass_filled", report.per_pass_filled}}
             .dump()
      << '\n';
}

inline void cmd_filter_list(std::ostream& out) {
  json arr = json::array();
  for (auto k : kAllFilters) {
    json j = filter_json(builtin_filter(k));
    j["id"] = filter_id(k);
    arr.push_back(j);
  }
  out << arr.dump() << '\n';
}

inline void cmd_filter_design(const Options& o, std::ostream& out) {
  Rational phase;
  try {
    phase = Rational::parse(o.phase);
  } catch (const Error& e) {
    throw UsageError(std::string("--phase: ") + e.what());
  }
  if (o.taps < 2 || o.taps % 2 != 0) throw UsageError("--taps must be even and >= 2");
  if (!(phase > Rational(0) && phase < Rational(1))) throw UsageError("--phase must lie in (0, 1)");
  out << filter_json(grid_adaptive_filter(o.taps, phase)).dump() << '\n';
}

inline void cmd_interp(const Options& o, std::ostream& out) {
  const FilterKind kind = filter_arg(o.filter);
  const DepthImage img = load_pgm(o.in);
  const DepthImage up = upsample(img, builtin_filter(kind), o.n, o.n);
  save_pgm(up, o.out, format_arg(o.format));
  out << json{{"filter", filter_name(kind)},
              {"n", o.n},
              {"input", {{"width", img.width()}, {"height", img.height()}}},
              {"output", {{"width", up.width()}, {"height", up.height()}}}}
             .dump()
      << '\n';
}

inline void cmd_psnr(const Options& o, std::ostream& out) {
  const DepthImage ref = load_pgm(o.ref);
  const DepthImage test = load_pgm(o.test);
  const Region region = o.interior ? Region::interior(ref, o.interior) : Region::full(ref);
  const QualityResult q = psnr(ref, test, region);
  out << json{{"mse", q.mse}, {"psnr_db", psnr_json(q.psnr_db)}}.dump() << '\n';
}

inline int cmd_bench(const Options& o, std::ostream& out, std::ostream& err) {
  bench::BenchConfig cfg;
  if (!o.filters.empty()) {
    cfg.filters.clear();
    std::stringstream ss(o.filters);
    for (std::string name; std::getline(ss, name, ',');)
      if (!name.empty()) cfg.filters.push_back(filter_arg(name));
    if (cfg.filters.empty()) throw UsageError("--filters is empty");
  }
  if (o.table_format != "csv" && o.table_format != "markdown")
    throw UsageError("--format must be csv or markdown");
  cfg.max_fill_passes = o.max_passes;
  cfg.interior_only = o.interior_only;
  cfg.threads = env_threads(o.threads ? o.threads : std::max(1u, std::thread::hardware_concurrency()));

  const bench::SuiteResult res = bench::run_suite(o.dir, cfg);
  for (const auto& e : res.errors) err << "bench: skipped " << e.image_name << ": " << e.message << '\n';
  write_text(o.out, bench::export_table(res.rows, o.table_format == "csv" ? bench::TableFormat::Csv
                                                                             : bench::TableFormat::Markdown));
  if (!o.emit_anfis.empty()) write_text(o.emit_anfis, bench::dataset_csv(bench::anfis_samples(res.rows)));

  json mean = json::object(), winners = json::object(), dev = json::array(), errors = json::array();
  for (const auto& [k, v] : res.summary.mean_psnr) mean[std::string(filter_name(k))] = v;
  for (const auto& [img, k] : res.summary.winner) winners[img] = filter_name(k);
  for (const auto& d : res.summary.deviations)
    dev.push_back({{"image", d.image_name},
                   {"filter", filter_name(d.filter)},
                   {"measured_db", psnr_json(d.measured_db)},
                   {"reference_db", d.reference_db}});
  for (const auto& e : res.errors) errors.push_back({{"image", e.image_name}, {"error", e.message}});
  out << json{{"rows", res.rows.size()},
              {"mean_psnr", mean},
              {"winner", winners},
              {"deviations", dev},
              {"errors", errors}}
             .dump()
      << '\n';
  return res.rows.empty() ? kData : kOk;
}

inline anfis::TrainConfig train_config(const Options& o) {
  anfis::TrainConfig cfg;
  cfg.n_rules = o.rules;
  cfg.epochs = o.epochs;
  cfg.seed = o.seed;
  cfg.learning_rate = o.lr;
  cfg.holdout_fraction = o.holdout;
  try {
    cfg.validate();
  } catch (const PreconditionError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

inline void cmd_anfis_train(const Options& o, std::ostream& out) {
  const anfis::TrainConfig cfg = train_config(o);
  const auto data = anfis::Dataset::normalized(bench::parse_dataset_csv(read_text(o.data)));
  const anfis::TrainResult res = anfis::fit(data, cfg, bench::anfis_input_names());
  anfis::save_model(res.model, o.model);
  json hist = json::array();
  for (const auto& h : res.history) {
    json e{{"train_rmse", h.train_rmse}, {"learning_rate", h.learning_rate}};
    if (h.holdout_rmse) e["holdout_rmse"] = *h.holdout_rmse;
    hist.push_back(e);
  }
  json summary{{"rules", cfg.n_rules},
               {"epochs", res.history.size()},
               {"train_rows", res.train_rows},
               {"holdout_rows", res.holdout_rows},
               {"train_rmse", res.history.back().train_rmse},
               {"history", hist}};
  if (res.history.back().holdout_rmse) summary["holdout_rmse"] = *res.history.back().holdout_rmse;
  out << summary.dump() << '\n';
}

inline void cmd_anfis_eval(const Options& o, std::ostream& out) {
  const anfis::AnfisModel model = anfis::load_model(o.model);
  const auto data = anfis::Dataset::with_normalization(bench::parse_dataset_csv(read_text(o.data)), model.normalization());
  const anfis::Evaluation e = anfis::evaluate(model, data);
  out << json{{"rows", data.size()},
              {"rmse", e.rmse},
              {"mae", e.mae},
              {"rmse_db", e.rmse * model.normalization().target.scale()}}
             .dump()
      << '\n';
}

inline void cmd_anfis_surface(const Options& o, std::ostream& out) {
  const anfis::AnfisModel model = anfis::load_model(o.model);
  const std::string csv = anfis::control_surface_csv(model, o.steps);
  if (o.out.empty())
    out << csv;
  else
    write_text(o.out, csv);
}

inline void cmd_anfis_reference(const Options& o, std::ostream& out) {
  const std::string csv = bench::dataset_csv(bench::anfis_samples(bench::reference_rows()));
  if (o.out.empty())
    out << csv;
  else
    write_text(o.out, csv);
}

}  // namespace detail

/// Runs one command. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace detail;
  Options o;
  CLI::App app{"Depth-map hole filling, grid-adaptive interpolation, PSNR benchmarking and ANFIS modelling",
               "depthgrid"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  auto* fill = app.add_subcommand("fill", "Fill zero-valued holes by masked 3x3 Gaussian averaging");
  fill->add_option("--in", o.in, "Input PGM")->required();
  fill->add_option("--out", o.out, "Output PGM")->required();
  fill->add_option("--max-passes", o.max_passes, "Maximum fill passes");
  fill->add_option("--format", o.format, "Output format: p2 or p5");

  auto* filter = app.add_subcommand("filter", "Inspect and design interpolation filters");
  filter->require_subcommand(1);
  auto* flist = filter->add_subcommand("list", "Print the built-in filters");
  auto* fdesign = filter->add_subcommand("design", "Lagrange filter for a tap count and phase");
  fdesign->add_option("--taps", o.taps, "Even tap count");
  fdesign->add_option("--phase", o.phase, "Insertion phase as num/den");

  auto* interp = app.add_subcommand("interp", "Upsample an image with an FIR filter");
  interp->add_option("--in", o.in, "Input PGM")->required();
  interp->add_option("--out", o.out, "Output PGM")->required();
  interp->add_option("--filter", o.filter, "linear_average | avs4 | h264_6 | grid4");
  interp->add_option("--n", o.n, "Pixels inserted per interval");
  interp->add_option("--format", o.format, "Output format: p2 or p5");

  auto* psnr_cmd = app.add_subcommand("psnr", "MSE and PSNR between two images");
  psnr_cmd->add_option("--ref", o.ref, "Reference PGM")->required();
  psnr_cmd->add_option("--test", o.test, "Test PGM")->required();
  psnr_cmd->add_option("--interior", o.interior, "Exclude a border of this many pixels");

  auto* bench_cmd = app.add_subcommand("bench", "Run the fill/halve/interpolate/score suite over a directory");
  bench_cmd->add_option("--dir", o.dir, "Directory of PGM depth maps")->required();
  bench_cmd->add_option("--out", o.out, "Output table")->required();
  bench_cmd->add_option("--filters", o.filters, "Comma-separated filter subset");
  bench_cmd->add_flag("--interior-only", o.interior_only, "Score interior pixels only");
  bench_cmd->add_option("--emit-anfis", o.emit_anfis, "Also write the ANFIS dataset CSV");
  bench_cmd->add_option("--format", o.table_format, "csv or markdown");
  bench_cmd->add_option("--max-passes", o.max_passes, "Maximum hole-fill passes");
  bench_cmd->add_option("--threads", o.threads, "Worker threads (DEPTHGRID_THREADS overrides)");

  auto* anfis_cmd = app.add_subcommand("anfis", "Train and evaluate the neuro-fuzzy PSNR model");
  anfis_cmd->require_subcommand(1);
  auto* atrain = anfis_cmd->add_subcommand("train", "Hybrid-train a model on a dataset CSV");
  atrain->add_option("--data", o.data, "pixels,filter_id,psnr_db CSV")->required();
  atrain->add_option("--out", o.model, "Model JSON")->required();
  atrain->add_option("--rules", o.rules, "Number of rules");
  atrain->add_option("--epochs", o.epochs, "Training epochs");
  atrain->add_option("--seed", o.seed, "Seed for anchors and split");
  atrain->add_option("--lr", o.lr, "Premise learning rate");
  atrain->add_option("--holdout", o.holdout, "Holdout fraction in [0, 1)");
  auto* aeval = anfis_cmd->add_subcommand("eval", "Evaluate a model on a dataset CSV");
  aeval->add_option("--model", o.model, "Model JSON")->required();
  aeval->add_option("--data", o.data, "pixels,filter_id,psnr_db CSV")->required();
  auto* asurf = anfis_cmd->add_subcommand("surface", "Grid-sampled model outputs as CSV");
  asurf->add_option("--model", o.model, "Model JSON")->required();
  asurf->add_option("--steps", o.steps, "Samples per axis");
  asurf->add_option("--out", o.out, "Output CSV (default stdout)");
  auto* aref = anfis_cmd->add_subcommand("reference-data", "Write the published PSNR table as a dataset CSV");
  aref->add_option("--out", o.out, "Output CSV (default stdout)");

  std::vector<std::string> argv_store{"depthgrid"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "depthgrid: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (fill->parsed()) cmd_fill(o, out);
    else if (flist->parsed()) cmd_filter_list(out);
    else if (fdesign->parsed()) cmd_filter_design(o, out);
    else if (interp->parsed()) cmd_interp(o, out);
    else if (psnr_cmd->parsed()) cmd_psnr(o, out);
    else if (bench_cmd->parsed()) return cmd_bench(o, out, err);
    else if (atrain->parsed()) cmd_anfis_train(o, out);
    else if (aeval->parsed()) cmd_anfis_eval(o, out);
    else if (asurf->parsed()) cmd_anfis_surface(o, out);
    else if (aref->parsed()) cmd_anfis_reference(o, out);
    return kOk;
  } catch (const UsageError& e) {
    err << "depthgrid: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericError& e) {
    err << "depthgrid: numeric failure: " << e.what() << '\n';
    return kNumeric;
  } catch (const Error& e) {
    err << "depthgrid: " << e.what() << '\n';
    return kData;
  }
}

}  // namespace depthgrid::cli
