#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "linksynth/optim/pso.hpp"

namespace linksynth::optim {

struct GaOptions {
  Budget budget{3, 20};
  int tournament = 3;
  double blend_alpha = 0.5;
  double mutation_sigma = 0.05;  // fraction of each axis range
  int elitism = 1;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::vector<std::vector<double>> initial;  // seeded individuals (e.g. template nominal)
};

/// Real-coded GA: tournament selection, BLX-alpha crossover, Gaussian
/// mutation (each gene with probability 1/d), elitism. The budget's
/// generation count includes the initial population, so a PxG run breeds
/// P*G individuals (elites keep their cached fitness and are not re-scored);
/// the trace has one best-so-far entry per generation.
template <class F>
OptimResult genetic(const F &f, const std::vector<Bound> &bounds, const GaOptions &opt = {}) {
  if (bounds.empty()) throw std::invalid_argument("ga: empty parameter space");
  if (opt.budget.population < 1 || opt.budget.generations < 1) throw std::invalid_argument("ga: invalid budget");
  const std::size_t d = bounds.size(), n = static_cast<std::size_t>(opt.budget.population);
  Rng rng(opt.seed);

  std::vector<std::vector<double>> pop(n, std::vector<double>(d));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k)
      pop[i][k] = i < opt.initial.size() ? std::clamp(opt.initial[i][k], bounds[k].lower, bounds[k].upper)
                                         : rng.uniform(bounds[k].lower, bounds[k].upper);
  auto fit = evaluate_all(f, pop, opt.threads);

  OptimResult out;
  out.evaluations = n;
  auto absorb = [&] {
    for (std::size_t i = 0; i < n; ++i)
      if (fit[i] < out.best) {
        out.best = fit[i];
        out.params = pop[i];
      }
    out.trace.push_back(out.best);
  };
  absorb();

  auto tournament = [&] {
    std::size_t best = rng.index(n);
    for (int t = 1; t < opt.tournament; ++t) {
      const std::size_t c = rng.index(n);
      if (fit[c] < fit[best] || (fit[c] == fit[best] && c < best)) best = c;
    }
    return best;
  };

  for (int gen = 1; gen < opt.budget.generations; ++gen) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return fit[a] < fit[b]; });
    const std::size_t elites = std::min<std::size_t>(static_cast<std::size_t>(std::max(opt.elitism, 0)), n);

    std::vector<std::vector<double>> next;
    std::vector<double> next_fit;
    for (std::size_t e = 0; e < elites; ++e) {
      next.push_back(pop[order[e]]);
      next_fit.push_back(fit[order[e]]);
    }
    std::vector<std::vector<double>> children;
    while (next.size() + children.size() < n) {
      const auto &a = pop[tournament()];
      const auto &b = pop[tournament()];
      std::vector<double> child(d);
      for (std::size_t k = 0; k < d; ++k) {
        const double lo = std::min(a[k], b[k]), hi = std::max(a[k], b[k]);
        const double ext = opt.blend_alpha * (hi - lo);
        double g = rng.uniform(lo - ext, hi + ext);
        if (rng.uniform() < 1.0 / static_cast<double>(d)) g += rng.normal() * opt.mutation_sigma * bounds[k].range();
        child[k] = std::clamp(g, bounds[k].lower, bounds[k].upper);
      }
      children.push_back(std::move(child));
    }
    const auto child_fit = evaluate_all(f, children, opt.threads);
    out.evaluations += children.size();
    for (std::size_t c = 0; c < children.size(); ++c) {
      next.push_back(std::move(children[c]));
      next_fit.push_back(child_fit[c]);
    }
    pop = std::move(next);
    fit = std::move(next_fit);
    absorb();
  }
  return out;
}

}  // namespace linksynth::optim
