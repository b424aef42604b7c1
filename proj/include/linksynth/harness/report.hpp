#pragma once

// Output files of a run: results.csv, per-config traces, histories, raw
// sample metrics and mechanism figures.

#include <filesystem>
#include <fstream>
#include <sstream>

#include "linksynth/harness/run.hpp"
#include "linksynth/harness/svg.hpp"

namespace linksynth::harness {

inline const std::vector<std::string> &results_columns() {
  static const std::vector<std::string> cols{"Model", "Shape",        "Opt",        "Planner", "DR",    "CL",
                                             "Best chamf.", "Steps", "% Imp.", "% Semantic", "Links", "Goal links"};
  return cols;
}

inline constexpr const char *kResultsNote =
    "# Best chamf., Steps, % Imp., Links and Goal links average successful samples only; "
    "% Semantic averages all samples; values are mean ± standard error; "
    "* marks % Imp. measured from the first buildable iteration when that was not the initial proposal";

inline std::string yes_no(bool b) { return b ? "Yes" : "No"; }

inline std::string results_csv(const std::vector<ConfigResult> &results) {
  std::ostringstream os;
  os << kResultsNote << "\n";
  const auto &cols = results_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
  os << "\n";
  for (const auto &r : results) {
    const auto &c = r.config;
    const auto &row = r.row;
    std::string imp = row.improvement_pct ? fixed(*row.improvement_pct, 3) : "n/a";
    if (row.improvement_pct && row.improvement_flagged) imp += "*";
    os << r.model << ',' << shape_name(c.shape) << ',' << optim::optimizer_name(c.optimizer) << ','
       << yes_no(c.planner) << ',' << yes_no(c.dr) << ',' << yes_no(c.cl) << ','
       << format_mean_se(row.best_chamfer) << ',' << format_mean_se(row.steps) << ',' << imp << ','
       << format_mean_se(row.semantic) << ',' << format_mean_se(row.links) << ',' << format_mean_se(row.goal_links)
       << "\n";
  }
  return os.str();
}

/// One line per iteration record of every sample.
inline std::string trace_csv(const ConfigResult &r) {
  std::ostringstream os;
  os << "sample,seed,episode,round,score,incumbent_score,accepted,buildable\n";
  for (const auto &s : r.samples)
    for (const auto &ep : s.episodes)
      for (const auto &rec : ep.records)
        os << s.sample << ',' << s.seed << ',' << rec.episode << ',' << rec.round << ',' << shortest(rec.score) << ','
           << shortest(rec.incumbent_score) << ',' << (rec.accepted ? 1 : 0) << ',' << (rec.buildable ? 1 : 0) << "\n";
  return os.str();
}

inline nlohmann::json sample_json(const SampleRecord &s) {
  nlohmann::json j{{"sample", s.sample},
                   {"seed", s.seed},
                   {"success", s.success},
                   {"aborted", s.aborted},
                   {"draws", s.draws},
                   {"semantic_successes", s.semantic_successes},
                   {"semantic_rate", s.semantic_rate()}};
  if (!s.failure.empty()) j["failure"] = s.failure;
  if (s.success) {
    j["best_chamfer"] = s.best_chamfer;
    j["steps"] = s.steps;
    j["links"] = s.links;
    j["goal_links"] = s.goal_links;
    j["improvement_pct"] = s.improvement_pct ? nlohmann::json(*s.improvement_pct) : nlohmann::json(nullptr);
    j["improvement_from_later_round"] = s.improvement_from_later_round;
    j["linkage"] = to_json(*s.best);
  }
  return j;
}

inline nlohmann::json samples_json(const ConfigResult &r) {
  nlohmann::json j{{"config", to_json(r.config)}, {"id", r.config.id()}, {"model", r.model}};
  j["samples"] = nlohmann::json::array();
  for (const auto &s : r.samples) j["samples"].push_back(sample_json(s));
  return j;
}

namespace detail {
inline void write_file(const std::filesystem::path &p, const std::string &content) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + p.string() + "'");
  out << content;
}
}  // namespace detail

/// Writes every output of `results` into `dir` (created if needed) and
/// returns the file names in write order.
inline std::vector<std::string> write_outputs(const std::filesystem::path &dir, const std::vector<ConfigResult> &results) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;
  auto put = [&](const std::string &name, const std::string &content) {
    detail::write_file(dir / name, content);
    files.push_back(name);
  };
  put("results.csv", results_csv(results));
  for (const auto &r : results) {
    const auto id = r.config.id();
    put("trace_" + id + ".csv", trace_csv(r));
    put("samples_" + id + ".json", samples_json(r).dump(2) + "\n");
    const auto target = make_target(r.config.shape);
    for (const auto &s : r.samples) {
      std::ostringstream hist;
      agents::write_history_jsonl(hist, s.episodes);
      put("history_" + id + "_s" + std::to_string(s.sample) + ".jsonl", hist.str());
      if (!s.best) continue;
      const auto sim = agents::safe_simulate(*s.best);
      if (sim.buildable) put("mech_" + id + "_" + std::to_string(s.sample) + ".svg", render_mechanism(*s.best, sim, target));
    }
  }
  return files;
}

}  // namespace linksynth::harness
