#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "linksynth/optim/objective.hpp"

namespace linksynth::optim {

inline constexpr std::size_t kGridCap = 100000;

struct GridOptions {
  std::size_t cap = kGridCap;
  unsigned threads = 1;
};

inline std::size_t lattice_size(const std::vector<int> &res) {
  std::size_t n = 1;
  for (int r : res) n *= static_cast<std::size_t>(r);
  return n;
}

/// Exhaustive lattice search. Lattice point i on an axis is
/// lower + (upper - lower) * i / (res - 1); points are visited in
/// lexicographic index order (first axis slowest) and a later point must be
/// strictly better to replace the incumbent. When the lattice exceeds the
/// cap, the largest resolutions are lowered until it fits (warning recorded);
/// if even resolution 2 everywhere exceeds the cap, std::length_error.
/// The trace holds the best-so-far value after each evaluation.
template <class F>
OptimResult grid_search(const F &f, const std::vector<Bound> &bounds, std::vector<int> res, const GridOptions &opt = {}) {
  if (bounds.empty()) throw std::invalid_argument("grid_search: empty parameter space");
  if (res.size() == 1 && bounds.size() > 1) res.assign(bounds.size(), res[0]);
  if (res.size() != bounds.size()) throw std::invalid_argument("grid_search: one resolution per axis required");
  for (int r : res)
    if (r < 2) throw std::invalid_argument("grid_search: resolution must be >= 2 per axis");
  for (const auto &b : bounds)
    if (!(b.lower < b.upper)) throw std::invalid_argument("grid_search: lower must be < upper");

  OptimResult out;
  const std::vector<int> asked = res;
  while (lattice_size(res) > opt.cap) {
    auto it = std::max_element(res.begin(), res.end());
    if (*it <= 2) throw std::length_error("grid_search: even a resolution-2 lattice exceeds the evaluation cap");
    --*it;
  }
  if (res != asked) {
    std::string msg = "grid resolution reduced to";
    for (int r : res) msg += " " + std::to_string(r);
    msg += " to stay within " + std::to_string(opt.cap) + " evaluations";
    out.warnings.push_back(msg);
  }

  const std::size_t total = lattice_size(res), d = bounds.size();
  auto point = [&](std::size_t flat) {
    std::vector<double> x(d);
    for (std::size_t k = d; k-- > 0;) {
      const auto r = static_cast<std::size_t>(res[k]);
      const std::size_t i = flat % r;
      flat /= r;
      x[k] = bounds[k].lower + (bounds[k].upper - bounds[k].lower) * static_cast<double>(i) / static_cast<double>(r - 1);
    }
    return x;
  };

  constexpr std::size_t kBatch = 1024;
  for (std::size_t start = 0; start < total; start += kBatch) {
    std::vector<std::vector<double>> pts;
    for (std::size_t i = start; i < std::min(total, start + kBatch); ++i) pts.push_back(point(i));
    const auto vals = evaluate_all(f, pts, opt.threads);
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (vals[i] < out.best) {
        out.best = vals[i];
        out.params = pts[i];
      }
      out.trace.push_back(out.best);
    }
  }
  out.evaluations = total;
  return out;
}

}  // namespace linksynth::optim
