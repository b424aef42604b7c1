#pragma once

#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include "linksynth/metrics.hpp"
#include "linksynth/optim/param_space.hpp"

namespace linksynth::optim {

/// Objective value for mechanisms that cannot be assembled over the cycle.
inline constexpr double kInfeasiblePenalty = 1e6;

struct ObjectiveOptions {
  int n_steps = kDefaultSteps;
  IcpOptions icp{};
};

/// Task loss of a finished mechanism: Chamfer distance between its
/// end-effector trace (after ICP onto the target) and the target.
/// Unbuildable or invalid mechanisms score kInfeasiblePenalty.
inline double mechanism_loss(const Linkage &lk, const Trajectory &target, const ObjectiveOptions &opt = {}) {
  if (!validate(lk).empty()) return kInfeasiblePenalty;
  const auto sim = simulate(lk, opt.n_steps);
  if (!sim.buildable) return kInfeasiblePenalty;
  const auto &trace = sim.trajectory(lk.target).samples;
  double d;
  try {
    d = score_trajectory(trace, target.samples, opt.icp).chamfer;
  } catch (const std::invalid_argument &) {
    d = chamfer(trace, target.samples);  // stationary end-effector: nothing to align
  }
  return std::isfinite(d) ? d : kInfeasiblePenalty;
}

/// objective(topology, params, target): instantiate, simulate, align, score.
class LinkageObjective {
 public:
  LinkageObjective(Linkage topology, ParamSpace space, Trajectory target, ObjectiveOptions opt = {})
      : topology_(std::move(topology)), space_(std::move(space)), target_(std::move(target)), opt_(opt) {
    check_space(topology_, space_);
    check_trajectory(target_, 1);
  }

  /// Throws std::out_of_range when `x` leaves the bounds.
  double operator()(const std::vector<double> &x) const {
    return mechanism_loss(instantiate(topology_, space_, x), target_, opt_);
  }

  const ParamSpace &space() const { return space_; }
  const Linkage &topology() const { return topology_; }
  const Trajectory &target() const { return target_; }

 private:
  Linkage topology_;
  ParamSpace space_;
  Trajectory target_;
  ObjectiveOptions opt_;
};

/// Evaluates f on every point, optionally on several threads. Results are
/// stored by index, so they never depend on scheduling.
template <class F>
std::vector<double> evaluate_all(const F &f, const std::vector<std::vector<double>> &points, unsigned threads = 1) {
  std::vector<double> out(points.size());
  if (threads <= 1 || points.size() < 2) {
    for (std::size_t i = 0; i < points.size(); ++i) out[i] = f(points[i]);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < points.size(); i = next++) {
        try {
          out[i] = f(points[i]);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
        }
      }
    });
  for (auto &th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return out;
}

/// Best-so-far result shared by every optimiser.
struct OptimResult {
  std::vector<double> params;
  double best = INFINITY;
  std::vector<double> trace;  // best-so-far, one entry per iteration / generation
  std::size_t evaluations = 0;
  std::vector<std::string> warnings;
};

}  // namespace linksynth::optim
