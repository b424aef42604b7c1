#pragma once

// Experiment configurations: one shape, optimiser and toggle combination,
// repeated `samples` times with seeds base + i.

#include <cctype>
#include <fstream>
#include <json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "linksynth/optim/pipeline.hpp"
#include "linksynth/targets.hpp"

namespace linksynth::harness {

enum class BackendKind { Scripted, Remote };

inline std::string backend_name(BackendKind k) { return k == BackendKind::Scripted ? "scripted" : "remote"; }

inline BackendKind parse_backend(std::string s) {
  for (auto &c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "scripted") return BackendKind::Scripted;
  if (s == "remote") return BackendKind::Remote;
  throw std::invalid_argument("unknown backend '" + s + "' (expected scripted or remote)");
}

struct ExperimentConfig {
  std::string name;   // empty: derived from the other fields
  std::string model;  // label for the Model column; empty: backend name or remote model
  ShapeKind shape = ShapeKind::Line;
  optim::OptimizerKind optimizer = optim::OptimizerKind::Grid;
  bool planner = true;
  bool dr = true;
  bool cl = true;
  BackendKind backend = BackendKind::Scripted;
  int samples = 5;
  std::uint64_t seed = 0;
  int bars = 4;  // specified target link count
  int r_max = 10;
  int episodes = 1;
  int candidates = 3;
  double epsilon = 0.005;

  void check() const {
    if (samples < 1) throw std::invalid_argument("config '" + id() + "': samples must be >= 1");
    if (bars != 4 && bars != 6) throw std::invalid_argument("config '" + id() + "': bars must be 4 or 6");
    if (r_max < 0 || episodes < 1 || candidates < 1 || !(epsilon >= 0.0))
      throw std::invalid_argument("config '" + id() + "': invalid loop settings");
  }

  /// File-name-safe identifier.
  std::string id() const {
    std::string raw = name;
    if (raw.empty()) {
      raw = std::string(shape_name(shape)) + "_" + optim::optimizer_name(optimizer) + "_p" + (planner ? "1" : "0") +
            "_dr" + (dr ? "1" : "0") + "_cl" + (cl ? "1" : "0");
      if (bars != 4) raw += "_b" + std::to_string(bars);
    }
    std::string out;
    for (char c : raw) {
      const auto u = static_cast<unsigned char>(c);
      out += std::isalnum(u) || c == '-' || c == '_' ? static_cast<char>(std::tolower(u)) : '_';
    }
    return out;
  }
};

inline nlohmann::json to_json(const ExperimentConfig &c) {
  nlohmann::json j{{"shape", std::string(shape_name(c.shape))},
                   {"optimizer", optim::optimizer_name(c.optimizer)},
                   {"planner", c.planner},
                   {"dr", c.dr},
                   {"cl", c.cl},
                   {"backend", backend_name(c.backend)},
                   {"samples", c.samples},
                   {"seed", c.seed},
                   {"bars", c.bars},
                   {"r_max", c.r_max},
                   {"episodes", c.episodes},
                   {"candidates", c.candidates},
                   {"epsilon", c.epsilon}};
  if (!c.name.empty()) j["name"] = c.name;
  if (!c.model.empty()) j["model"] = c.model;
  return j;
}

inline ExperimentConfig config_from_json(const nlohmann::json &j) {
  if (!j.is_object()) throw std::invalid_argument("experiment config must be a JSON object");
  static const std::vector<std::string> known{"name",  "model",   "shape",   "optimizer", "planner",
                                              "dr",    "cl",      "backend", "samples",   "seed",
                                              "bars",  "r_max",   "episodes", "candidates", "epsilon"};
  for (const auto &[k, v] : j.items())
    if (std::find(known.begin(), known.end(), k) == known.end())
      throw std::invalid_argument("experiment config: unknown field '" + k + "'");
  if (!j.contains("shape")) throw std::invalid_argument("experiment config: missing 'shape'");
  ExperimentConfig c;
  try {
    c.shape = parse_shape_kind(j.at("shape").get<std::string>());
    if (j.contains("name")) c.name = j["name"].get<std::string>();
    if (j.contains("model")) c.model = j["model"].get<std::string>();
    if (j.contains("optimizer")) c.optimizer = optim::parse_optimizer(j["optimizer"].get<std::string>());
    if (j.contains("planner")) c.planner = j["planner"].get<bool>();
    if (j.contains("dr")) c.dr = j["dr"].get<bool>();
    if (j.contains("cl")) c.cl = j["cl"].get<bool>();
    if (j.contains("backend")) c.backend = parse_backend(j["backend"].get<std::string>());
    if (j.contains("samples")) c.samples = j["samples"].get<int>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("bars")) c.bars = j["bars"].get<int>();
    if (j.contains("r_max")) c.r_max = j["r_max"].get<int>();
    if (j.contains("episodes")) c.episodes = j["episodes"].get<int>();
    if (j.contains("candidates")) c.candidates = j["candidates"].get<int>();
    if (j.contains("epsilon")) c.epsilon = j["epsilon"].get<double>();
  } catch (const nlohmann::json::exception &e) {
    throw std::invalid_argument(std::string("experiment config: ") + e.what());
  }
  c.check();
  return c;
}

/// The eight planner/DR/CL combinations of `base`, planner slowest.
inline std::vector<ExperimentConfig> toggle_sweep(const ExperimentConfig &base) {
  std::vector<ExperimentConfig> out;
  for (int m = 0; m < 8; ++m) {
    ExperimentConfig c = base;
    c.name.clear();
    c.planner = m & 4;
    c.dr = m & 2;
    c.cl = m & 1;
    out.push_back(c);
  }
  return out;
}

/// Accepts a list of configs or {"configs": [...]}; a config with
/// "sweep": "toggles" expands into its eight toggle combinations.
inline std::vector<ExperimentConfig> configs_from_json(const nlohmann::json &doc) {
  const nlohmann::json *list = &doc;
  if (doc.is_object()) {
    if (!doc.contains("configs")) throw std::invalid_argument("config file: expected a list or {\"configs\": [...]}");
    list = &doc["configs"];
  }
  if (!list->is_array() || list->empty()) throw std::invalid_argument("config file: no experiment configs");
  std::vector<ExperimentConfig> out;
  for (const auto &item : *list) {
    if (item.is_object() && item.contains("sweep")) {
      if (item["sweep"] != "toggles") throw std::invalid_argument("config file: only \"sweep\": \"toggles\" is supported");
      auto copy = item;
      copy.erase("sweep");
      for (auto &c : toggle_sweep(config_from_json(copy))) out.push_back(std::move(c));
    } else {
      out.push_back(config_from_json(item));
    }
  }
  for (std::size_t i = 0; i < out.size(); ++i)
    for (std::size_t k = 0; k < i; ++k)
      if (out[i].id() == out[k].id()) throw std::invalid_argument("config file: duplicate config id '" + out[i].id() + "'");
  return out;
}

inline std::vector<ExperimentConfig> load_configs(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error &e) {
    throw std::invalid_argument("config file '" + path + "': " + e.what());
  }
  return configs_from_json(doc);
}

}  // namespace linksynth::harness
