#pragma once

// First-order Sugeno ANFIS with Gaussian premises and hybrid learning.
//
// Layers, per input vector x:
//   1. mu[k][i] = exp(-(x_i - c_ki)^2 / (2 sigma_ki^2))
//   2. w[k]     = prod_i mu[k][i]
//   3. wn[k]    = w[k] / sum(w)
//   4. g[k]     = wn[k] * f_k(x),   f_k(x) = sum_i p_ki x_i + r_k
//   5. out      = sum(g)
//
// Training alternates an exact least-squares solve for (p, r) with one
// gradient step on (c, sigma).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <ranges>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "depthgrid/error.hpp"

namespace depthgrid::anfis {

inline double gaussian_mf(double x, double c, double sigma) {
  if (!(sigma > 0.0)) throw PreconditionError("gaussian_mf: sigma must be > 0");
  const double d = x - c;
  return std::exp(-(d * d) / (2.0 * sigma * sigma));
}

struct Gaussian {
  double c = 0.0;
  double sigma = 1.0;
  friend bool operator==(const Gaussian&, const Gaussian&) = default;
};

struct Rule {
  std::vector<Gaussian> premise;   // one per input
  std::vector<double> consequent;  // p_1..p_n, r
  friend bool operator==(const Rule&, const Rule&) = default;
};

/// Min-max map of one column onto [0, 1]. A constant column maps to 0 by a
/// pure shift so the transform stays invertible.
struct MinMax {
  double min = 0.0;
  double max = 1.0;

  double scale() const noexcept { return max > min ? max - min : 1.0; }
  double normalize(double v) const noexcept { return (v - min) / scale(); }
  double denormalize(double v) const noexcept { return v * scale() + min; }
  friend bool operator==(const MinMax&, const MinMax&) = default;

  static MinMax identity() { return {0.0, 1.0}; }
};

struct Normalization {
  std::vector<MinMax> inputs;
  MinMax target = MinMax::identity();
  friend bool operator==(const Normalization&, const Normalization&) = default;
};

class AnfisModel {
 public:
  AnfisModel() = default;
  AnfisModel(std::size_t n_inputs, std::vector<Rule> rules, Normalization norm = {},
             std::vector<std::string> input_names = {})
      : n_inputs_(n_inputs), rules_(std::move(rules)), norm_(std::move(norm)), names_(std::move(input_names)) {
    if (norm_.inputs.empty()) norm_.inputs.assign(n_inputs_, MinMax::identity());
    if (names_.empty())
      for (std::size_t i = 0; i < n_inputs_; ++i) names_.push_back("x" + std::to_string(i + 1));
    validate();
  }

  void validate() const {
    if (n_inputs_ == 0) throw PreconditionError("model needs at least one input");
    if (rules_.empty()) throw PreconditionError("model needs at least one rule");
    if (norm_.inputs.size() != n_inputs_ || names_.size() != n_inputs_)
      throw PreconditionError("normalization/name arity does not match n_inputs");
    for (std::size_t k = 0; k < rules_.size(); ++k) {
      const auto& r = rules_[k];
      if (r.premise.size() != n_inputs_ || r.consequent.size() != n_inputs_ + 1)
        throw PreconditionError("rule " + std::to_string(k) + " has wrong arity");
      for (const auto& g : r.premise)
        if (!(g.sigma > 0.0) || !std::isfinite(g.c))
          throw PreconditionError("rule " + std::to_string(k) + " has an invalid membership function");
    }
  }

  std::size_t n_inputs() const noexcept { return n_inputs_; }
  std::size_t n_rules() const noexcept { return rules_.size(); }
  const std::vector<Rule>& rules() const noexcept { return rules_; }
  std::vector<Rule>& rules() noexcept { return rules_; }
  const Normalization& normalization() const noexcept { return norm_; }
  const std::vector<std::string>& input_names() const noexcept { return names_; }

  friend bool operator==(const AnfisModel&, const AnfisModel&) = default;

 private:
  std::size_t n_inputs_ = 0;
  std::vector<Rule> rules_;
  Normalization norm_;
  std::vector<std::string> names_;
};

// ---------------------------------------------------------------------------
// Data

struct Sample {
  std::vector<double> x;
  double y = 0.0;
  friend bool operator==(const Sample&, const Sample&) = default;
};

/// Training rows, stored in normalized units, plus the map back to raw units.
struct Dataset {
  std::vector<Sample> rows;
  Normalization normalization;

  std::size_t size() const noexcept { return rows.size(); }
  bool empty() const noexcept { return rows.empty(); }
  std::size_t arity() const { return rows.empty() ? 0 : rows.front().x.size(); }

  /// Rows used as-is (identity normalization).
  static Dataset raw(std::vector<Sample> rows) {
    check_arity(rows);
    Dataset d;
    d.normalization.inputs.assign(rows.empty() ? 0 : rows.front().x.size(), MinMax::identity());
    d.rows = std::move(rows);
    return d;
  }

  /// Fits a min-max normalization on `rows` and stores them normalized.
  static Dataset normalized(const std::vector<Sample>& raw_rows) {
    check_arity(raw_rows);
    if (raw_rows.empty()) throw PreconditionError("cannot normalize an empty dataset");
    const std::size_t n = raw_rows.front().x.size();
    Dataset d;
    d.normalization.inputs.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      auto [lo, hi] = std::ranges::minmax(raw_rows | std::views::transform([i](const Sample& s) { return s.x[i]; }));
      d.normalization.inputs[i] = {lo, hi};
    }
    auto [tlo, thi] = std::ranges::minmax(raw_rows | std::views::transform(&Sample::y));
    d.normalization.target = {tlo, thi};
    d.rows = raw_rows;
    for (auto& s : d.rows) {
      for (std::size_t i = 0; i < n; ++i) s.x[i] = d.normalization.inputs[i].normalize(s.x[i]);
      s.y = d.normalization.target.normalize(s.y);
    }
    return d;
  }

  /// Applies an existing normalization to raw rows.
  static Dataset with_normalization(const std::vector<Sample>& raw_rows, const Normalization& norm) {
    check_arity(raw_rows);
    Dataset d;
    d.normalization = norm;
    d.rows = raw_rows;
    for (auto& s : d.rows) {
      if (s.x.size() != norm.inputs.size()) throw PreconditionError("dataset arity does not match normalization");
      for (std::size_t i = 0; i < s.x.size(); ++i) s.x[i] = norm.inputs[i].normalize(s.x[i]);
      s.y = norm.target.normalize(s.y);
    }
    return d;
  }

  std::vector<Sample> raw_rows() const {
    std::vector<Sample> out = rows;
    for (auto& s : out) {
      for (std::size_t i = 0; i < s.x.size(); ++i) s.x[i] = normalization.inputs[i].denormalize(s.x[i]);
      s.y = normalization.target.denormalize(s.y);
    }
    return out;
  }

  Dataset subset(std::span<const std::size_t> indices) const {
    Dataset d;
    d.normalization = normalization;
    for (auto i : indices) d.rows.push_back(rows.at(i));
    return d;
  }

 private:
  static void check_arity(const std::vector<Sample>& rows) {
    for (const auto& s : rows)
      if (s.x.size() != rows.front().x.size()) throw PreconditionError("dataset rows differ in arity");
    if (!rows.empty() && rows.front().x.empty()) throw PreconditionError("dataset rows have no inputs");
  }
};

struct TrainConfig {
  std::size_t epochs = 50;
  double learning_rate = 0.01;
  std::size_t n_rules = 9;
  std::uint64_t seed = 0;
  double holdout_fraction = 0.0;

  void validate() const {
    if (epochs < 1) throw PreconditionError("epochs must be >= 1");
    if (n_rules < 1) throw PreconditionError("n_rules must be >= 1");
    if (!(learning_rate > 0.0)) throw PreconditionError("learning_rate must be > 0");
    if (!(holdout_fraction >= 0.0 && holdout_fraction < 1.0))
      throw PreconditionError("holdout_fraction must lie in [0, 1)");
  }
};

// ---------------------------------------------------------------------------
// Forward pass

struct Trace {
  std::vector<std::vector<double>> memberships;  // [rule][input]
  std::vector<double> firing;
  std::vector<double> normalized;
  std::vector<double> rule_outputs;  // f_k(x)
  std::vector<double> weighted;      // wn_k * f_k(x)
};

struct ForwardResult {
  double output = 0.0;
  Trace trace;
};

inline double rule_output(const Rule& rule, std::span<const double> x) {
  double f = rule.consequent.back();
  for (std::size_t i = 0; i < x.size(); ++i) f += rule.consequent[i] * x[i];
  return f;
}

inline ForwardResult forward(const AnfisModel& model, std::span<const double> x) {
  if (x.size() != model.n_inputs())
    throw PreconditionError("forward: expected " + std::to_string(model.n_inputs()) + " inputs, got " +
                            std::to_string(x.size()));
  const std::size_t nr = model.n_rules();
  ForwardResult res;
  Trace& t = res.trace;
  t.memberships.assign(nr, std::vector<double>(x.size()));
  t.firing.resize(nr);
  t.normalized.resize(nr);
  t.rule_outputs.resize(nr);
  t.weighted.resize(nr);

  double total = 0.0;
  for (std::size_t k = 0; k < nr; ++k) {
    const Rule& r = model.rules()[k];
    double w = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      t.memberships[k][i] = gaussian_mf(x[i], r.premise[i].c, r.premise[i].sigma);
      w *= t.memberships[k][i];
    }
    t.firing[k] = w;
    total += w;
  }
  if (!(total > 0.0)) {
    // name the input whose best membership across all rules is smallest
    std::size_t worst = 0;
    double worst_best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < x.size(); ++i) {
      double best = 0.0;
      for (std::size_t k = 0; k < nr; ++k) best = std::max(best, t.memberships[k][i]);
      if (best < worst_best) {
        worst_best = best;
        worst = i;
      }
    }
    throw NumericError("degenerate input: all firing strengths underflow to 0; input '" +
                       model.input_names()[worst] + "' = " + std::to_string(x[worst]) +
                       " is outside every membership function");
  }
  for (std::size_t k = 0; k < nr; ++k) {
    t.normalized[k] = t.firing[k] / total;
    t.rule_outputs[k] = rule_output(model.rules()[k], x);
    t.weighted[k] = t.normalized[k] * t.rule_outputs[k];
    res.output += t.weighted[k];
  }
  return res;
}

inline double predict(const AnfisModel& model, std::span<const double> x) { return forward(model, x).output; }

/// Maps a raw-unit input through the model's normalization and back.
inline double predict_raw(const AnfisModel& model, std::span<const double> raw_x) {
  const auto& norm = model.normalization();
  std::vector<double> x(raw_x.begin(), raw_x.end());
  if (x.size() != norm.inputs.size()) throw PreconditionError("predict_raw: arity mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = norm.inputs[i].normalize(x[i]);
  return norm.target.denormalize(predict(model, x));
}

// ---------------------------------------------------------------------------
// Evaluation

struct Evaluation {
  double rmse = 0.0;
  double mae = 0.0;
  std::vector<double> residuals;  // target - output
};

inline Evaluation evaluate(const AnfisModel& model, const Dataset& data) {
  if (data.empty()) throw PreconditionError("evaluate: empty dataset");
  Evaluation e;
  double sq = 0.0;
  double ab = 0.0;
  for (const auto& s : data.rows) {
    const double r = s.y - predict(model, s.x);
    e.residuals.push_back(r);
    sq += r * r;
    ab += std::abs(r);
  }
  const auto n = static_cast<double>(data.size());
  e.rmse = std::sqrt(sq / n);
  e.mae = ab / n;
  return e;
}

inline double sse(const AnfisModel& model, const Dataset& data) {
  double s = 0.0;
  for (const auto& row : data.rows) {
    const double r = row.y - predict(model, row.x);
    s += r * r;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Initialization

namespace detail {

/// Seeded index in [0, n) straight from the engine, so the value does not
/// depend on the standard library's distribution implementation.
inline std::size_t seeded_index(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

}  // namespace detail

/// Farthest-point anchors: start from a seeded row, then repeatedly take the
/// row farthest (Euclidean, normalized units) from every anchor chosen so far,
/// lowest index on ties. Anchor k becomes the centres of rule k.
inline std::vector<std::size_t> farthest_point_anchors(const Dataset& data, std::size_t count, std::uint64_t seed) {
  if (count > data.size()) throw PreconditionError("more anchors requested than rows");
  std::mt19937_64 rng(seed);
  std::vector<std::size_t> anchors{detail::seeded_index(rng, data.size())};
  std::vector<double> dist(data.size(), std::numeric_limits<double>::infinity());
  std::vector<bool> taken(data.size(), false);
  taken[anchors[0]] = true;
  while (anchors.size() < count) {
    const auto& a = data.rows[anchors.back()].x;
    std::size_t best = data.size();
    double best_d = -1.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
      double d = 0.0;
      for (std::size_t j = 0; j < a.size(); ++j) d += (data.rows[i].x[j] - a[j]) * (data.rows[i].x[j] - a[j]);
      dist[i] = std::min(dist[i], d);
      if (!taken[i] && dist[i] > best_d) {
        best_d = dist[i];
        best = i;
      }
    }
    taken[best] = true;
    anchors.push_back(best);
  }
  return anchors;
}

inline constexpr double kSigmaInitFloor = 0.05;
inline constexpr double kSigmaMin = 1e-3;

/// Rule centres at farthest-point anchors; widths (axis range) / (2 n_rules)
/// with a floor of 0.05; consequents zero.
inline AnfisModel init_model(const Dataset& data, const TrainConfig& config,
                             std::vector<std::string> input_names = {}) {
  config.validate();
  if (data.size() < config.n_rules)
    throw PreconditionError("init_model: " + std::to_string(data.size()) + " rows for " +
                            std::to_string(config.n_rules) + " rules");
  const std::size_t n = data.arity();
  std::vector<double> sigma(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto [lo, hi] = std::ranges::minmax(data.rows | std::views::transform([i](const Sample& s) { return s.x[i]; }));
    sigma[i] = std::max(kSigmaInitFloor, (hi - lo) / (2.0 * static_cast<double>(config.n_rules)));
  }
  std::vector<Rule> rules;
  for (auto a : farthest_point_anchors(data, config.n_rules, config.seed)) {
    Rule r;
    for (std::size_t i = 0; i < n; ++i) r.premise.push_back({data.rows[a].x[i], sigma[i]});
    r.consequent.assign(n + 1, 0.0);
    rules.push_back(std::move(r));
  }
  return AnfisModel(n, std::move(rules), data.normalization, std::move(input_names));
}

// ---------------------------------------------------------------------------
// Least-squares consequents

/// Row t: [wn_1(x_t) * (x_t, 1), ..., wn_R(x_t) * (x_t, 1)].
inline Eigen::MatrixXd consequent_design(const AnfisModel& model, const Dataset& data) {
  const std::size_t n = model.n_inputs();
  const std::size_t block = n + 1;
  Eigen::MatrixXd a(static_cast<Eigen::Index>(data.size()), static_cast<Eigen::Index>(model.n_rules() * block));
  for (std::size_t t = 0; t < data.size(); ++t) {
    const auto fr = forward(model, data.rows[t].x);
    for (std::size_t k = 0; k < model.n_rules(); ++k) {
      const auto col = static_cast<Eigen::Index>(k * block);
      for (std::size_t i = 0; i < n; ++i)
        a(static_cast<Eigen::Index>(t), col + static_cast<Eigen::Index>(i)) = fr.trace.normalized[k] * data.rows[t].x[i];
      a(static_cast<Eigen::Index>(t), col + static_cast<Eigen::Index>(n)) = fr.trace.normalized[k];
    }
  }
  return a;
}

struct LseResult {
  AnfisModel model;
  std::size_t rank = 0;
  std::size_t unknowns = 0;
  bool rank_deficient = false;
};

/// Consequents minimizing training SSE for the current premises. Uses a
/// complete orthogonal decomposition, so a rank-deficient system yields the
/// minimum-norm solution (flagged in the result).
inline LseResult lse_consequents(const AnfisModel& model, const Dataset& data) {
  if (data.empty()) throw PreconditionError("lse_consequents: empty dataset");
  const Eigen::MatrixXd a = consequent_design(model, data);
  Eigen::VectorXd y(static_cast<Eigen::Index>(data.size()));
  for (std::size_t t = 0; t < data.size(); ++t) y(static_cast<Eigen::Index>(t)) = data.rows[t].y;

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
  const Eigen::VectorXd theta = cod.solve(y);

  LseResult res{model, static_cast<std::size_t>(cod.rank()), static_cast<std::size_t>(a.cols()), false};
  res.rank_deficient = res.rank < res.unknowns;
  const std::size_t block = model.n_inputs() + 1;
  for (std::size_t k = 0; k < model.n_rules(); ++k)
    for (std::size_t j = 0; j < block; ++j)
      res.model.rules()[k].consequent[j] = theta(static_cast<Eigen::Index>(k * block + j));
  return res;
}

// ---------------------------------------------------------------------------
// Premise gradient

struct PremiseGradient {
  std::vector<std::vector<Gaussian>> d;  // d[k][i] = {dSSE/dc, dSSE/dsigma}
  double sse = 0.0;
};

/// Analytic dSSE/dc and dSSE/dsigma with consequents held fixed:
///   d out / d w_k      = (f_k - out) / sum(w)
///   d w_k / d c_ki     = w_k (x_i - c_ki) / sigma_ki^2
///   d w_k / d sigma_ki = w_k (x_i - c_ki)^2 / sigma_ki^3
inline PremiseGradient grad_premise(const AnfisModel& model, const Dataset& data) {
  const std::size_t n = model.n_inputs();
  PremiseGradient g;
  g.d.assign(model.n_rules(), std::vector<Gaussian>(n, Gaussian{0.0, 0.0}));
  for (const auto& row : data.rows) {
    const auto fr = forward(model, row.x);
    const double err = row.y - fr.output;
    g.sse += err * err;
    const double total = std::accumulate(fr.trace.firing.begin(), fr.trace.firing.end(), 0.0);
    for (std::size_t k = 0; k < model.n_rules(); ++k) {
      const double dout_dw = (fr.trace.rule_outputs[k] - fr.output) / total;
      const double common = -2.0 * err * dout_dw * fr.trace.firing[k];
      for (std::size_t i = 0; i < n; ++i) {
        const auto& mf = model.rules()[k].premise[i];
        const double dx = row.x[i] - mf.c;
        const double s2 = mf.sigma * mf.sigma;
        g.d[k][i].c += common * dx / s2;
        g.d[k][i].sigma += common * dx * dx / (s2 * mf.sigma);
      }
    }
  }
  return g;
}

/// Gradient-descent update of the premises; widths stay >= kSigmaMin.
inline AnfisModel premise_step(const AnfisModel& model, const PremiseGradient& g, double learning_rate) {
  AnfisModel out = model;
  for (std::size_t k = 0; k < out.n_rules(); ++k)
    for (std::size_t i = 0; i < out.n_inputs(); ++i) {
      auto& mf = out.rules()[k].premise[i];
      mf.c -= learning_rate * g.d[k][i].c;
      mf.sigma = std::max(kSigmaMin, mf.sigma - learning_rate * g.d[k][i].sigma);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Training

struct DatasetSplit {
  Dataset train;
  Dataset holdout;
};

/// Seeded shuffle, then the last floor(fraction * n) rows become the holdout.
inline DatasetSplit split_dataset(const Dataset& data, double holdout_fraction, std::uint64_t seed) {
  if (!(holdout_fraction >= 0.0 && holdout_fraction < 1.0))
    throw PreconditionError("holdout_fraction must lie in [0, 1)");
  std::vector<std::size_t> idx(data.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(seed ^ 0x9E3779B97F4A7C15ull);
  for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[detail::seeded_index(rng, i)]);
  const auto n_hold = static_cast<std::size_t>(std::floor(holdout_fraction * static_cast<double>(data.size())));
  const std::size_t n_train = data.size() - n_hold;
  std::vector<std::size_t> tr(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::size_t> ho(idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
  std::ranges::sort(tr);
  std::ranges::sort(ho);
  return {data.subset(tr), data.subset(ho)};
}

struct EpochStats {
  double train_rmse = 0.0;
  std::optional<double> holdout_rmse;
  double learning_rate = 0.0;
};

struct TrainResult {
  AnfisModel model;
  std::vector<EpochStats> history;
  std::size_t train_rows = 0;
  std::size_t holdout_rows = 0;
};

namespace detail {

inline constexpr double kDivergenceFactor = 10.0;
inline constexpr int kMaxHalvings = 30;

inline TrainResult run_epochs(AnfisModel model, const DatasetSplit& split, const TrainConfig& config) {
  if (split.train.empty()) throw PreconditionError("train: no training rows");
  TrainResult res{model, {}, split.train.size(), split.holdout.size()};
  double lr = config.learning_rate;
  std::optional<double> baseline;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const AnfisModel fitted = lse_consequents(model, split.train).model;
    if (!baseline) baseline = std::max(evaluate(fitted, split.train).rmse, 1e-6);
    const PremiseGradient g = grad_premise(fitted, split.train);
    int halvings = 0;
    for (;;) {
      AnfisModel stepped = premise_step(fitted, g, lr);
      double rmse = std::numeric_limits<double>::infinity();
      try {
        rmse = evaluate(stepped, split.train).rmse;
      } catch (const NumericError&) {
      }
      if (std::isfinite(rmse) && rmse <= kDivergenceFactor * *baseline) {
        model = std::move(stepped);
        EpochStats st{rmse, std::nullopt, lr};
        if (!split.holdout.empty()) st.holdout_rmse = evaluate(model, split.holdout).rmse;
        res.history.push_back(st);
        break;
      }
      if (++halvings > kMaxHalvings)
        throw NumericError("training diverged: train RMSE exceeds 10x its starting value even at learning rate " +
                           std::to_string(lr));
      lr *= 0.5;
    }
  }
  res.model = std::move(model);
  return res;
}

}  // namespace detail

/// Hybrid training of an existing model. Rows are split per
/// `config.holdout_fraction`; only the training part drives the updates.
inline TrainResult train(const AnfisModel& model, const Dataset& data, const TrainConfig& config) {
  config.validate();
  return detail::run_epochs(model, split_dataset(data, config.holdout_fraction, config.seed), config);
}

/// Split, initialize on the training part, train.
inline TrainResult fit(const Dataset& data, const TrainConfig& config, std::vector<std::string> input_names = {}) {
  config.validate();
  const DatasetSplit split = split_dataset(data, config.holdout_fraction, config.seed);
  return detail::run_epochs(init_model(split.train, config, std::move(input_names)), split, config);
}

}  // namespace depthgrid::anfis
