#pragma once

// Runs experiment configurations sample by sample and aggregates the
// per-sample metrics into table rows.

#include <atomic>
#include <functional>
#include <memory>
#include <thread>

#include "linksynth/agents/loop.hpp"
#include "linksynth/agents/remote.hpp"
#include "linksynth/agents/scripted.hpp"
#include "linksynth/harness/config.hpp"
#include "linksynth/harness/stats.hpp"

namespace linksynth::harness {

struct SampleRecord {
  int sample = 0;
  std::uint64_t seed = 0;
  bool success = false;  // finished with a buildable design below the penalty
  bool aborted = false;
  std::string failure;
  double best_chamfer = optim::kInfeasiblePenalty;
  int steps = 0;  // refinement round that produced the best design
  std::optional<double> improvement_pct;
  bool improvement_from_later_round = false;
  int draws = 0;
  int semantic_successes = 0;
  int links = 0;
  int goal_links = 0;
  std::optional<Linkage> best;
  std::vector<agents::EpisodeResult> episodes;

  double semantic_rate() const { return draws > 0 ? static_cast<double>(semantic_successes) / draws : 0.0; }
};

struct TableRow {
  MeanSe best_chamfer, steps, semantic, links, goal_links;
  std::optional<double> improvement_pct;  // mean only
  bool improvement_flagged = false;
};

struct ConfigResult {
  ExperimentConfig config;
  std::string model;
  std::vector<SampleRecord> samples;
  TableRow row;
};

using BackendFactory =
    std::function<std::unique_ptr<agents::AgentBackend>(const ExperimentConfig &, std::uint64_t seed)>;

inline std::unique_ptr<agents::AgentBackend> default_backend(const ExperimentConfig &c, std::uint64_t seed) {
  if (c.backend == BackendKind::Scripted)
    return std::make_unique<agents::ScriptedBackend>(seed, agents::default_rules());
  return std::make_unique<agents::RemoteBackend>(agents::RemoteConfig::from_env());
}

inline std::string model_label(const ExperimentConfig &c) {
  if (!c.model.empty()) return c.model;
  if (c.backend == BackendKind::Remote) {
    const auto m = agents::RemoteConfig::from_env().model;
    if (!m.empty()) return m;
  }
  return backend_name(c.backend);
}

inline agents::TaskSpec task_for(const ExperimentConfig &c) {
  const std::string shape(shape_name(c.shape));
  return {"Design a planar " + std::to_string(c.bars) + "-bar linkage whose end-effector traces a " + shape + ".",
          shape, c.bars};
}

inline agents::LoopConfig loop_config_for(const ExperimentConfig &c, std::uint64_t seed) {
  agents::LoopConfig lc;
  lc.episodes = c.episodes;
  lc.r_max = c.r_max;
  lc.epsilon = c.epsilon;
  lc.candidates = c.candidates;
  lc.planner = c.planner;
  lc.lifting.dr = c.dr;
  lc.lifting.cl = c.cl;
  lc.lifting.seed = seed;
  lc.fit.kind = c.optimizer;
  lc.fit.threads = 1;
  lc.seed = seed;
  return lc;
}

/// Failures of any kind are recorded in the sample, never thrown.
inline SampleRecord run_sample(const ExperimentConfig &c, int index, const BackendFactory &factory) {
  SampleRecord s;
  s.sample = index;
  s.seed = c.seed + static_cast<std::uint64_t>(index);
  try {
    const auto backend = factory(c, s.seed);
    agents::ExemplarMemory memory;
    const auto target = make_target(c.shape);
    s.episodes = agents::refinement_loop(task_for(c), target, loop_config_for(c, s.seed),
                                         agents::Backends::all(*backend), memory);
  } catch (const std::exception &e) {
    s.failure = e.what();
    return s;
  }
  const agents::EpisodeResult *best = nullptr;
  for (const auto &ep : s.episodes) {
    s.draws += ep.stats.draws;
    s.semantic_successes += ep.stats.successes;
    s.aborted = s.aborted || ep.aborted;
    if (ep.aborted && s.failure.empty()) s.failure = ep.abort_reason;
    if (ep.best && (!best || ep.best_score < best->best_score)) best = &ep;
  }
  if (!best || !(best->best_score < optim::kInfeasiblePenalty)) {
    if (s.failure.empty()) s.failure = "no buildable design";
    return s;
  }
  s.success = true;
  s.best = best->best;
  s.best_chamfer = best->best_score;
  s.steps = best->best_round;
  if (best->initial_score && *best->initial_score > 0.0) {
    s.improvement_pct = improvement_pct(*best->initial_score, best->best_score);
    s.improvement_from_later_round = best->initial_round > 0;
  }
  s.links = count_links_joints(extract_link_graph(*s.best)).links;
  s.goal_links = s.links - c.bars;
  return s;
}

/// Chamfer, steps, improvement and link counts over successful samples;
/// semantic rate over every sample.
inline TableRow aggregate(const std::vector<SampleRecord> &samples) {
  std::vector<double> chamfer, steps, imp, semantic, links, goal;
  TableRow row;
  for (const auto &s : samples) {
    semantic.push_back(s.semantic_rate());
    if (!s.success) continue;
    chamfer.push_back(s.best_chamfer);
    steps.push_back(s.steps);
    links.push_back(s.links);
    goal.push_back(s.goal_links);
    if (s.improvement_pct) {
      imp.push_back(*s.improvement_pct);
      row.improvement_flagged = row.improvement_flagged || s.improvement_from_later_round;
    }
  }
  row.best_chamfer = mean_se(chamfer);
  row.steps = mean_se(steps);
  row.semantic = mean_se(semantic);
  row.links = mean_se(links);
  row.goal_links = mean_se(goal);
  if (!imp.empty()) row.improvement_pct = mean_se(imp).mean;
  return row;
}

struct RunOptions {
  unsigned threads = 1;
  BackendFactory backend = default_backend;
};

/// Every (config, sample) pair is an independent job; results land by index
/// so the output does not depend on scheduling.
inline std::vector<ConfigResult> run_matrix(const std::vector<ExperimentConfig> &configs, const RunOptions &opt = {}) {
  for (const auto &c : configs) c.check();
  std::vector<ConfigResult> out(configs.size());
  std::vector<std::pair<std::size_t, int>> jobs;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    out[i].config = configs[i];
    out[i].model = model_label(configs[i]);
    out[i].samples.resize(static_cast<std::size_t>(configs[i].samples));
    for (int s = 0; s < configs[i].samples; ++s) jobs.emplace_back(i, s);
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      const auto [ci, si] = jobs[k];
      out[ci].samples[static_cast<std::size_t>(si)] = run_sample(configs[ci], si, opt.backend);
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(jobs.size())));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto &t : pool) t.join();
  }
  for (auto &r : out) r.row = aggregate(r.samples);
  return out;
}

}  // namespace linksynth::harness
