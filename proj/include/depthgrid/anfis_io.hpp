#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "depthgrid/anfis.hpp"
#include "depthgrid/error.hpp"

namespace depthgrid::anfis {

/// {"inputs": [names], "rules": [{"premise": [{"c","sigma"}], "consequent": [...]}],
///  "normalization": {"inputs": [{"min","max"}], "target": {"min","max"}}}
inline nlohmann::json model_to_json(const AnfisModel& model) {
  using nlohmann::json;
  json rules = json::array();
  for (const auto& r : model.rules()) {
    json premise = json::array();
    for (const auto& g : r.premise) premise.push_back({{"c", g.c}, {"sigma", g.sigma}});
    rules.push_back({{"premise", premise}, {"consequent", r.consequent}});
  }
  json inputs_norm = json::array();
  for (const auto& m : model.normalization().inputs) inputs_norm.push_back({{"min", m.min}, {"max", m.max}});
  const auto& t = model.normalization().target;
  return {{"inputs", model.input_names()},
          {"rules", rules},
          {"normalization", {{"inputs", inputs_norm}, {"target", {{"min", t.min}, {"max", t.max}}}}}};
}

inline AnfisModel model_from_json(const nlohmann::json& j) {
  try {
    auto names = j.at("inputs").get<std::vector<std::string>>();
    std::vector<Rule> rules;
    for (const auto& jr : j.at("rules")) {
      Rule r;
      for (const auto& jp : jr.at("premise")) r.premise.push_back({jp.at("c").get<double>(), jp.at("sigma").get<double>()});
      r.consequent = jr.at("consequent").get<std::vector<double>>();
      rules.push_back(std::move(r));
    }
    Normalization norm;
    for (const auto& jm : j.at("normalization").at("inputs"))
      norm.inputs.push_back({jm.at("min").get<double>(), jm.at("max").get<double>()});
    const auto& jt = j.at("normalization").at("target");
    norm.target = {jt.at("min").get<double>(), jt.at("max").get<double>()};
    const std::size_t n = names.size();
    return AnfisModel(n, std::move(rules), std::move(norm), std::move(names));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(ParseError::Kind::BadRecord, 0, std::string("invalid model JSON: ") + e.what());
  }
}

inline void save_model(const AnfisModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << model_to_json(model).dump(2) << '\n';
  if (!out) throw IoError(path.string(), "write failed");
}

inline AnfisModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(ParseError::Kind::BadRecord, e.byte, e.what(), path.string() + ": ");
  }
  return model_from_json(j);
}

/// Grid-sampled forward outputs over the raw input box of a two-input model,
/// as CSV: <input1>,<input2>,output (raw units).
inline std::string control_surface_csv(const AnfisModel& model, std::size_t steps) {
  if (model.n_inputs() != 2) throw PreconditionError("control surface needs a two-input model");
  if (steps < 2) throw PreconditionError("control surface needs >= 2 steps per axis");
  const auto& norm = model.normalization();
  std::ostringstream os;
  os.precision(17);
  os << model.input_names()[0] << ',' << model.input_names()[1] << ",output\n";
  for (std::size_t a = 0; a < steps; ++a)
    for (std::size_t b = 0; b < steps; ++b) {
      const double u = static_cast<double>(a) / static_cast<double>(steps - 1);
      const double v = static_cast<double>(b) / static_cast<double>(steps - 1);
      const std::vector<double> x{u, v};
      os << norm.inputs[0].denormalize(u) << ',' << norm.inputs[1].denormalize(v) << ','
         << norm.target.denormalize(predict(model, x)) << '\n';
    }
  return os.str();
}

}  // namespace depthgrid::anfis
