#pragma once

// Parameter fitting for an agent-proposed topology.

#include <cstdint>
#include <stdexcept>
#include <string>

#include "linksynth/optim/grid.hpp"
#include "linksynth/optim/pso.hpp"

namespace linksynth::optim {

enum class OptimizerKind { Grid, PSO };

inline std::string optimizer_name(OptimizerKind k) { return k == OptimizerKind::Grid ? "Grid" : "PSO"; }

inline OptimizerKind parse_optimizer(std::string s) {
  for (auto &c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "grid") return OptimizerKind::Grid;
  if (s == "pso") return OptimizerKind::PSO;
  throw std::invalid_argument("unknown optimizer '" + s + "' (expected grid or pso)");
}

struct FitOptions {
  OptimizerKind kind = OptimizerKind::Grid;
  double relative_span = 0.5;  // each length searched within +-50%
  int grid_resolution = 3;
  std::size_t grid_axes = 4;   // lengths nearest the end-effector; the rest stay nominal
  Budget pso_budget{30, 100};
  ObjectiveOptions objective{};
  unsigned threads = 1;
};

struct FitResult {
  Linkage linkage;  // best instance (the input itself when nothing beat it)
  double score = kInfeasiblePenalty;
  double nominal_score = kInfeasiblePenalty;
  std::vector<double> trace;
  std::size_t evaluations = 0;
};

/// Fits the lengths of `lk` to `target`. The nominal instance is scored
/// first and only a strictly better optimum replaces it. Structurally
/// invalid linkages come back untouched with the penalty score.
inline FitResult optimize_linkage(const Linkage &lk, const Trajectory &target, const FitOptions &opt = {},
                                  std::uint64_t seed = 0) {
  FitResult out;
  out.linkage = lk;
  out.nominal_score = out.score = mechanism_loss(lk, target, opt.objective);
  out.evaluations = 1;
  out.trace.push_back(out.score);
  if (!validate(lk).empty()) return out;

  ParamSpace space = length_space(lk, opt.relative_span);
  std::erase_if(space.params, [](const Param &p) { return !(p.bound.lower < p.bound.upper); });
  if (opt.kind == OptimizerKind::Grid && space.params.size() > opt.grid_axes) space.params.resize(opt.grid_axes);
  if (space.params.empty()) return out;

  const LinkageObjective f(lk, space, target, opt.objective);
  OptimResult r;
  if (opt.kind == OptimizerKind::Grid) {
    r = grid_search(f, space.bounds(), std::vector<int>(space.size(), opt.grid_resolution), {kGridCap, opt.threads});
  } else {
    PsoOptions p;
    p.budget = opt.pso_budget;
    p.seed = seed;
    p.threads = opt.threads;
    p.initial = {nominal(lk, space)};
    r = pso(f, space.bounds(), p);
  }
  out.evaluations += r.evaluations;
  for (double v : r.trace) out.trace.push_back(std::min(out.trace.back(), v));
  if (r.best < out.score) {
    out.score = r.best;
    out.linkage = instantiate(lk, space, r.params);
  }
  return out;
}

}  // namespace linksynth::optim
