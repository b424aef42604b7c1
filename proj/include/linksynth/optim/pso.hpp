#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "linksynth/optim/objective.hpp"
#include "linksynth/optim/rng.hpp"

namespace linksynth::optim {

struct Budget {
  int population = 30;
  int generations = 100;  // PSO iterations / GA generations
};

/// Parses "PxG" (e.g. "60x300").
inline Budget parse_budget(const std::string &s) {
  const auto x = s.find_first_of("xX");
  if (x == std::string::npos) throw std::invalid_argument("budget must look like PxG, got '" + s + "'");
  Budget b;
  try {
    std::size_t used = 0;
    b.population = std::stoi(s.substr(0, x), &used);
    if (used != x) throw std::invalid_argument("");
    const auto rest = s.substr(x + 1);
    b.generations = std::stoi(rest, &used);
    if (used != rest.size()) throw std::invalid_argument("");
  } catch (const std::exception &) {
    throw std::invalid_argument("budget must look like PxG, got '" + s + "'");
  }
  if (b.population < 1 || b.generations < 1) throw std::invalid_argument("budget entries must be >= 1");
  return b;
}

struct PsoOptions {
  Budget budget{};
  double inertia = 0.72;
  double cognitive = 1.49;
  double social = 1.49;
  double velocity_clamp = 0.2;  // fraction of each axis range
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::vector<std::vector<double>> initial;  // optional seeded particles
};

namespace detail {

/// Mirrors a coordinate back inside [lo, hi], flipping its velocity.
inline void reflect(double &x, double &v, const Bound &b) {
  for (int guard = 0; guard < 4 && (x < b.lower || x > b.upper); ++guard) {
    if (x > b.upper) x = b.upper - (x - b.upper);
    else x = b.lower + (b.lower - x);
    v = -v;
  }
  x = std::clamp(x, b.lower, b.upper);
}

}  // namespace detail

/// Global-best particle swarm. Trace entry 0 is the best of the initial
/// swarm, then one entry per iteration.
template <class F>
OptimResult pso(const F &f, const std::vector<Bound> &bounds, const PsoOptions &opt = {}) {
  if (bounds.empty()) throw std::invalid_argument("pso: empty parameter space");
  if (opt.budget.population < 1 || opt.budget.generations < 1) throw std::invalid_argument("pso: invalid budget");
  const std::size_t d = bounds.size(), n = static_cast<std::size_t>(opt.budget.population);
  Rng rng(opt.seed);

  std::vector<std::vector<double>> x(n, std::vector<double>(d)), v = x;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      const double vmax = opt.velocity_clamp * bounds[k].range();
      x[i][k] = i < opt.initial.size() ? std::clamp(opt.initial[i][k], bounds[k].lower, bounds[k].upper)
                                       : rng.uniform(bounds[k].lower, bounds[k].upper);
      v[i][k] = rng.uniform(-vmax, vmax);
    }

  OptimResult out;
  auto fx = evaluate_all(f, x, opt.threads);
  out.evaluations += n;
  auto pbest = x;
  auto pval = fx;
  std::size_t g = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (pval[i] < pval[g]) g = i;
  out.params = pbest[g];
  out.best = pval[g];
  out.trace.push_back(out.best);

  for (int it = 0; it < opt.budget.generations; ++it) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < d; ++k) {
        const double vmax = opt.velocity_clamp * bounds[k].range();
        const double r1 = rng.uniform(), r2 = rng.uniform();
        double vel = opt.inertia * v[i][k] + opt.cognitive * r1 * (pbest[i][k] - x[i][k]) +
                     opt.social * r2 * (out.params[k] - x[i][k]);
        vel = std::clamp(vel, -vmax, vmax);
        double pos = x[i][k] + vel;
        detail::reflect(pos, vel, bounds[k]);
        x[i][k] = pos;
        v[i][k] = vel;
      }
    fx = evaluate_all(f, x, opt.threads);
    out.evaluations += n;
    for (std::size_t i = 0; i < n; ++i) {
      if (fx[i] < pval[i]) {
        pval[i] = fx[i];
        pbest[i] = x[i];
      }
      if (pval[i] < out.best) {
        out.best = pval[i];
        out.params = pbest[i];
      }
    }
    out.trace.push_back(out.best);
  }
  return out;
}

}  // namespace linksynth::optim
