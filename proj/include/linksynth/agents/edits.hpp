#pragma once

// Structural edit operators shared by the scripted refiner and the tests.
// Each returns std::nullopt when it cannot produce a valid 1-DOF linkage.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "linksynth/linkage.hpp"
#include "linksynth/optim/rng.hpp"

namespace linksynth::agents::edits {

/// Valid, single-input and assembling over the whole cycle.
inline bool compliant(const Linkage &lk) {
  if (!validate(lk).empty() || dof(lk) != 1) return false;
  return simulate(lk, 72).buildable;
}

namespace detail {

inline std::string fresh_id(const Linkage &lk, const std::string &stem) {
  if (!lk.find(stem)) return stem;
  for (int i = 1;; ++i) {
    const auto id = stem + std::to_string(i);
    if (!lk.find(id)) return id;
  }
}

}  // namespace detail

/// Overconstraint fix for revolute joints whose circles stop meeting: grow
/// the failing joint's distances (evening them out) until the loop closes
/// all cycle long, moving on to whichever joint fails next.
inline std::optional<Linkage> repair_infeasible(const Linkage &lk) {
  if (!validate(lk).empty() || dof(lk) != 1) return std::nullopt;
  Linkage cand = lk;
  for (int attempt = 0; attempt < 60; ++attempt) {
    const auto sim = simulate(cand, 72);
    if (sim.buildable) return cand;
    const auto &d = sim.diagnostics.front();
    Joint *j = cand.find(d.joint);
    if (d.rule != "infeasible" || !j || !j->is_revolute()) return std::nullopt;
    auto &r = std::get<RevoluteJoint>(j->kind);
    const double mean = 0.5 * (r.dist0 + r.dist1);
    r.dist0 = 1.1 * (0.5 * r.dist0 + 0.5 * mean);
    r.dist1 = 1.1 * (0.5 * r.dist1 + 0.5 * mean);
  }
  return std::nullopt;
}

/// Overconstraint fix for multi-input proposals: every crank after the first
/// becomes a revolute joint pinned to its anchor and to one earlier joint,
/// with lengths measured at the initial pose. Candidate pins are tried
/// ground pivots first, in list order. Among combinations that reach one
/// degree of freedom and can be repaired into assembling, the one whose
/// link count stays closest to the original wins (earliest on ties).
inline std::optional<Linkage> remove_redundant_cranks(const Linkage &lk) {
  if (!structural_diagnostics(lk).empty()) return std::nullopt;
  const auto pose = solve_pose(lk, 0.0);
  if (pose.failure) return std::nullopt;

  std::vector<std::size_t> extra;
  bool first = true;
  for (std::size_t i = 0; i < lk.joints.size(); ++i)
    if (lk.joints[i].is_crank()) {
      if (!first) extra.push_back(i);
      first = false;
    }
  if (extra.empty()) return std::nullopt;

  std::vector<std::vector<std::size_t>> options;
  for (auto i : extra) {
    const auto &anchor = std::get<CrankJoint>(lk.joints[i].kind).anchor;
    std::vector<std::size_t> fixed, moving;
    for (std::size_t q = 0; q < i; ++q) {
      if (lk.joints[q].id == anchor || distance(pose.positions[q], pose.positions[i]) <= 1e-9) continue;
      (lk.joints[q].is_fixed() ? fixed : moving).push_back(q);
    }
    fixed.insert(fixed.end(), moving.begin(), moving.end());
    if (fixed.empty()) return std::nullopt;
    options.push_back(std::move(fixed));
  }

  const int links0 = count_links_joints(extract_link_graph(lk)).links;
  std::optional<Linkage> best;
  int best_gap = 1 << 30;
  std::vector<std::size_t> pick(extra.size(), 0);
  while (true) {
    Linkage cand = lk;
    for (std::size_t k = 0; k < extra.size(); ++k) {
      const std::size_t i = extra[k], q = options[k][pick[k]];
      const auto c = std::get<CrankJoint>(lk.joints[i].kind);
      const Vec2 p0 = pose.positions[*lk.index_of(c.anchor)], p1 = pose.positions[q], x = pose.positions[i];
      const Branch br = cross(p1 - p0, x - p0) >= 0.0 ? Branch::Positive : Branch::Negative;
      cand.joints[i] = make_revolute(lk.joints[i].id, c.anchor, lk.joints[q].id, distance(p0, x), distance(p1, x), br);
    }
    if (auto fixed = repair_infeasible(cand)) {
      const int gap = std::abs(count_links_joints(extract_link_graph(*fixed)).links - links0);
      if (gap < best_gap) {
        best_gap = gap;
        best = std::move(fixed);
      }
    }
    std::size_t k = 0;
    while (k < pick.size() && ++pick[k] == options[k].size()) pick[k++] = 0;
    if (k == pick.size()) return best;
  }
}

/// Underconstraint fix: hang a new dyad off the end-effector and a new ground
/// pivot placed beside its path; the dyad's free joint becomes the new
/// end-effector. The added loop keeps the mobility at one. The pivot is tried
/// above, right of, below and left of the path, starting at `first_side`.
inline std::optional<Linkage> add_loop(const Linkage &lk, std::size_t first_side = 0) {
  if (!compliant(lk)) return std::nullopt;
  const auto sim = simulate(lk);
  const auto &path = sim.trajectory(lk.target).samples;
  const Vec2 c = centroid(path);
  double reach = 0.0;
  for (const auto &p : path) reach = std::max(reach, distance(p, c));
  if (!(reach > 0.0)) return std::nullopt;

  const std::array<Vec2, 4> sides{Vec2{0, 1}, Vec2{1, 0}, Vec2{0, -1}, Vec2{-1, 0}};
  for (std::size_t k = 0; k < sides.size(); ++k) {
    const Vec2 dir = sides[(first_side + k) % sides.size()];
    Linkage cand = lk;
    const Vec2 g = c + dir * (1.5 * reach);
    double far = 0.0;
    for (const auto &p : path) far = std::max(far, distance(p, g));
    const std::string gid = detail::fresh_id(cand, "G"), fid = detail::fresh_id(cand, "F");
    cand.joints.insert(cand.joints.begin() + static_cast<long>(*cand.index_of(lk.target)) + 1,
                       make_fixed(gid, g.x, g.y));
    cand.joints.push_back(make_revolute(fid, lk.target, gid, 0.6 * far, 0.6 * far));
    cand.target = fid;
    if (compliant(cand)) return cand;
  }
  return std::nullopt;
}

/// Kinematic-inaccuracy fix: rescale the lengths of the end-effector joint and
/// its parents by factors in [0.8, 1.25] drawn from `rng`.
inline std::optional<Linkage> adjust_lengths(const Linkage &lk, optim::Rng &rng) {
  if (!validate(lk).empty()) return std::nullopt;
  std::vector<std::string> ids{lk.target};
  if (const Joint *t = lk.find(lk.target))
    for (const auto &p : t->parents()) ids.push_back(p);
  for (int attempt = 0; attempt < 8; ++attempt) {
    Linkage cand = lk;
    for (const auto &id : ids) {
      Joint *j = cand.find(id);
      auto factor = [&] { return std::exp(rng.uniform(std::log(0.8), std::log(1.25))); };
      if (auto *c = std::get_if<CrankJoint>(&j->kind)) c->radius *= factor();
      if (auto *r = std::get_if<RevoluteJoint>(&j->kind)) {
        r->dist0 *= factor();
        r->dist1 *= factor();
      }
    }
    if (compliant(cand)) return cand;
  }
  return std::nullopt;
}

}  // namespace linksynth::agents::edits
