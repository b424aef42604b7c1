#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "linksynth/optim/ga.hpp"
#include "linksynth/optim/topologies.hpp"

namespace linksynth::optim {

struct EnumGaResult {
  Linkage best;
  std::string topology;
  double objective = kInfeasiblePenalty;
  std::vector<double> trace;  // per generation, best over all templates so far
  std::size_t evaluations = 0;
};

struct EnumGaOptions {
  ObjectiveOptions objective{};
  unsigned threads = 1;
};

/// Enumerate the n-bar templates and fit each with the GA under `budget`.
/// Template t uses seed splitmix64(seed + t) so adding templates never
/// changes the stream of the earlier ones.
inline EnumGaResult enum_ga(const Trajectory &target, int n_bars, const Budget &budget, std::uint64_t seed,
                            const EnumGaOptions &opt = {}) {
  const auto templates = enumerate_topologies(n_bars);
  EnumGaResult out;
  out.trace.assign(static_cast<std::size_t>(budget.generations), kInfeasiblePenalty);
  for (std::size_t t = 0; t < templates.size(); ++t) {
    const auto &tpl = templates[t];
    const LinkageObjective f(tpl.linkage, tpl.space, target, opt.objective);
    GaOptions ga;
    ga.budget = budget;
    ga.seed = splitmix64(seed + t);
    ga.threads = opt.threads;
    ga.initial = {nominal(tpl.linkage, tpl.space)};
    const auto r = genetic(f, tpl.space.bounds(), ga);
    out.evaluations += r.evaluations;
    for (std::size_t g = 0; g < out.trace.size(); ++g) out.trace[g] = std::min(out.trace[g], r.trace[g]);
    if (t == 0 || r.best < out.objective) {
      out.objective = r.best;
      out.best = instantiate(tpl.linkage, tpl.space, r.params);
      out.topology = tpl.name;
    }
  }
  return out;
}

}  // namespace linksynth::optim
