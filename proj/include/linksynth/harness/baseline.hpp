#pragma once

// Normalised index against a baseline and the Enum+GA budget sweep table.

#include <cmath>
#include <sstream>

#include "linksynth/harness/stats.hpp"
#include "linksynth/optim/enum_ga.hpp"
#include "linksynth/targets.hpp"

namespace linksynth::harness {

/// value / baseline per entry; below 1 means better than the baseline.
inline std::vector<double> normalized_index(const std::vector<double> &values, double baseline) {
  if (!(baseline > 0.0) || !std::isfinite(baseline))
    throw std::invalid_argument("normalized_index: baseline must be positive and finite");
  std::vector<double> out;
  out.reserve(values.size());
  for (double v : values) out.push_back(v / baseline);
  return out;
}

inline std::string format_index(double v) { return fixed(v, 3); }

struct SweepCell {
  optim::Budget budget;
  int bars = 4;
  MeanSe objective;
  std::vector<double> values;  // one per (shape, seed), in shape-major order
};

struct SweepOptions {
  std::vector<ShapeKind> shapes{ShapeKind::Line};
  std::vector<optim::Budget> budgets{{3, 20}, {6, 20}};
  std::vector<int> bars{4, 6};
  int samples = 5;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// Budget-major grid of Enum+GA runs; sample i of every cell uses seed + i.
inline std::vector<SweepCell> enum_ga_sweep(const SweepOptions &opt) {
  if (opt.samples < 1 || opt.shapes.empty() || opt.budgets.empty() || opt.bars.empty())
    throw std::invalid_argument("enum_ga_sweep: empty sweep");
  std::vector<Trajectory> targets;
  for (auto s : opt.shapes) targets.push_back(make_target(s));
  optim::EnumGaOptions ga;
  ga.threads = opt.threads;
  std::vector<SweepCell> cells;
  for (const auto &b : opt.budgets)
    for (int bars : opt.bars) {
      SweepCell cell{b, bars, {}, {}};
      for (const auto &t : targets)
        for (int i = 0; i < opt.samples; ++i)
          cell.values.push_back(optim::enum_ga(t, bars, b, opt.seed + static_cast<std::uint64_t>(i), ga).objective);
      cell.objective = mean_se(cell.values);
      cells.push_back(std::move(cell));
    }
  return cells;
}

inline std::string budget_label(const optim::Budget &b) {
  return std::to_string(b.population) + "x" + std::to_string(b.generations);
}

inline std::string sweep_csv(const std::vector<SweepCell> &cells) {
  std::ostringstream os;
  os << "# Enum+GA best Chamfer per budget and bar family; mean ± standard error over shapes and seeds\n";
  os << "Pop x Gen,Bars,Chamfer\n";
  for (const auto &c : cells) os << budget_label(c.budget) << ',' << c.bars << ',' << format_mean_se(c.objective) << "\n";
  return os.str();
}

}  // namespace linksynth::harness
