#pragma once

/**
 * @file linkage.hpp
 * @brief Planar linkage model: joints, validation, Gruebler mobility and
 *        kinematic simulation over one crank revolution.
 *
 * A linkage is an ordered list of joints. Fixed joints sit on the ground,
 * a single crank rotates about its anchor, and every revolute joint is the
 * intersection of two circles centred on previously solved joints. Joints
 * are solved in list order, so the list order is the topological order.
 */

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "linksynth/geometry.hpp"

namespace linksynth {

enum class Branch { Positive, Negative };

struct FixedJoint {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const FixedJoint &, const FixedJoint &) = default;
};

struct CrankJoint {
  std::string anchor;
  double radius = 1.0;
  double initial_angle = 0.0;
  friend bool operator==(const CrankJoint &, const CrankJoint &) = default;
};

struct RevoluteJoint {
  std::string parent0;
  std::string parent1;
  double dist0 = 1.0;
  double dist1 = 1.0;
  Branch branch = Branch::Positive;
  friend bool operator==(const RevoluteJoint &, const RevoluteJoint &) = default;
};

struct Joint {
  std::string id;
  std::variant<FixedJoint, CrankJoint, RevoluteJoint> kind;

  bool is_fixed() const { return std::holds_alternative<FixedJoint>(kind); }
  bool is_crank() const { return std::holds_alternative<CrankJoint>(kind); }
  bool is_revolute() const { return std::holds_alternative<RevoluteJoint>(kind); }

  /// Ids of the joints this one is constrained to (0, 1 or 2 entries).
  std::vector<std::string> parents() const {
    if (const auto *c = std::get_if<CrankJoint>(&kind)) return {c->anchor};
    if (const auto *r = std::get_if<RevoluteJoint>(&kind)) return {r->parent0, r->parent1};
    return {};
  }

  friend bool operator==(const Joint &, const Joint &) = default;
};

inline Joint make_fixed(std::string id, double x, double y) { return {std::move(id), FixedJoint{x, y}}; }
inline Joint make_crank(std::string id, std::string anchor, double radius, double initial_angle = 0.0) {
  return {std::move(id), CrankJoint{std::move(anchor), radius, initial_angle}};
}
inline Joint make_revolute(std::string id, std::string p0, std::string p1, double d0, double d1,
                           Branch branch = Branch::Positive) {
  return {std::move(id), RevoluteJoint{std::move(p0), std::move(p1), d0, d1, branch}};
}

struct Linkage {
  std::string name;
  std::vector<Joint> joints;
  std::string target;
  std::string intent;

  std::optional<std::size_t> index_of(const std::string &id) const {
    for (std::size_t i = 0; i < joints.size(); ++i)
      if (joints[i].id == id) return i;
    return std::nullopt;
  }
  const Joint *find(const std::string &id) const {
    auto i = index_of(id);
    return i ? &joints[*i] : nullptr;
  }
  Joint *find(const std::string &id) {
    auto i = index_of(id);
    return i ? &joints[*i] : nullptr;
  }
  std::size_t crank_count() const {
    return static_cast<std::size_t>(std::count_if(joints.begin(), joints.end(),
                                                  [](const Joint &j) { return j.is_crank(); }));
  }

  friend bool operator==(const Linkage &, const Linkage &) = default;
};

/// Structured simulator / validator message (the `sim_msg` fed to lifting).
struct Diagnostic {
  std::string joint;
  std::string rule;
  std::string message;
  std::optional<int> step;

  std::string to_string() const {
    std::ostringstream os;
    os << "[" << rule << "] joint " << (joint.empty() ? "-" : joint);
    if (step) os << " at step " << *step;
    os << ": " << message;
    return os.str();
  }
  friend bool operator==(const Diagnostic &, const Diagnostic &) = default;
};

namespace detail {

inline void check_structure(const Linkage &lk, std::vector<Diagnostic> &out) {
  if (lk.joints.empty()) {
    out.push_back({"", "empty", "linkage has no joints", std::nullopt});
    return;
  }
  std::map<std::string, std::size_t> first_seen;
  for (std::size_t i = 0; i < lk.joints.size(); ++i) {
    const auto &j = lk.joints[i];
    if (j.id.empty()) out.push_back({j.id, "empty-id", "joint id must be non-empty", std::nullopt});
    if (!first_seen.emplace(j.id, i).second)
      out.push_back({j.id, "duplicate-id", "joint id declared more than once", std::nullopt});
  }

  for (std::size_t i = 0; i < lk.joints.size(); ++i) {
    const auto &j = lk.joints[i];
    if (const auto *c = std::get_if<CrankJoint>(&j.kind)) {
      if (!(c->radius > 0.0) || !std::isfinite(c->radius))
        out.push_back({j.id, "non-positive-length", "crank radius must be > 0", std::nullopt});
      if (!std::isfinite(c->initial_angle))
        out.push_back({j.id, "non-finite", "crank initial_angle must be finite", std::nullopt});
    } else if (const auto *r = std::get_if<RevoluteJoint>(&j.kind)) {
      if (!(r->dist0 > 0.0) || !std::isfinite(r->dist0) || !(r->dist1 > 0.0) || !std::isfinite(r->dist1))
        out.push_back({j.id, "non-positive-length", "revolute distances must be > 0", std::nullopt});
      if (r->parent0 == r->parent1)
        out.push_back({j.id, "duplicate-parent", "revolute parents must be distinct joints ('" + r->parent0 + "')",
                       std::nullopt});
    } else if (const auto *f = std::get_if<FixedJoint>(&j.kind)) {
      if (!std::isfinite(f->x) || !std::isfinite(f->y))
        out.push_back({j.id, "non-finite", "fixed joint coordinates must be finite", std::nullopt});
    }
    for (const auto &p : j.parents()) {
      auto it = first_seen.find(p);
      if (it == first_seen.end())
        out.push_back({j.id, "unknown-reference", "references undeclared joint '" + p + "'", std::nullopt});
      else if (it->second >= i)
        out.push_back({j.id, "order", "parent '" + p + "' must be declared before this joint", std::nullopt});
    }
  }

  if (lk.target.empty() || !first_seen.contains(lk.target))
    out.push_back({lk.target, "unknown-target", "target joint '" + lk.target + "' does not exist", std::nullopt});

  // Connectivity over the joint graph; every fixed joint hangs off one ground node.
  const std::size_t n = lk.joints.size();
  std::vector<std::size_t> parent(n + 1);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  auto unite = [&](std::size_t a, std::size_t b) { parent[root(a)] = root(b); };
  for (std::size_t i = 0; i < n; ++i) {
    if (lk.joints[i].is_fixed()) unite(i, n);
    for (const auto &p : lk.joints[i].parents()) {
      auto it = first_seen.find(p);
      if (it != first_seen.end()) unite(i, it->second);
    }
  }
  // A ground pivot with no bar attached is isolated from every moving link.
  std::set<std::string> referenced;
  for (const auto &j : lk.joints)
    for (const auto &p : j.parents()) referenced.insert(p);
  if (n > 1)
    for (const auto &j : lk.joints)
      if (j.is_fixed() && !referenced.contains(j.id) && j.id != lk.target)
        out.push_back({j.id, "disconnected", "fixed pivot has no bar attached", std::nullopt});

  const std::size_t anchor = root(0);
  for (std::size_t i = 1; i < n; ++i)
    if (root(i) != anchor) {
      out.push_back({lk.joints[i].id, "disconnected", "joint is not connected to the rest of the linkage",
                     std::nullopt});
    }
}

}  // namespace detail

/// Diagnostics for every violated joint / linkage invariant; empty iff valid.
inline std::vector<Diagnostic> validate(const Linkage &lk) {
  std::vector<Diagnostic> out;
  detail::check_structure(lk, out);
  const auto cranks = lk.crank_count();
  if (cranks != 1) {
    std::string who;
    for (const auto &j : lk.joints)
      if (j.is_crank()) who += (who.empty() ? "" : ",") + j.id;
    out.push_back({who, "crank-count",
                   "exactly one crank (single driving input) is required, found " + std::to_string(cranks),
                   std::nullopt});
  }
  return out;
}

/// Same as validate() but without the single-crank rule, so mobility can be
/// measured on multi-input proposals.
inline std::vector<Diagnostic> structural_diagnostics(const Linkage &lk) {
  std::vector<Diagnostic> out;
  detail::check_structure(lk, out);
  return out;
}

// ---------------------------------------------------------------------------
// Mobility

/// Rigid links as sets of pin ids. The ground link holds every fixed joint.
struct LinkGraph {
  std::vector<std::set<std::string>> links;
};

struct LinkCount {
  int links = 0;
  int joints = 0;
  friend bool operator==(const LinkCount &, const LinkCount &) = default;
};

/// Gruebler mobility F = 3(n - 1) - 2j for planar lower pairs.
constexpr int gruebler(int links, int joints) { return 3 * (links - 1) - 2 * joints; }

/// A pin shared by k links contributes k - 1 joints.
inline LinkCount count_links_joints(const LinkGraph &g) {
  std::map<std::string, int> multiplicity;
  for (const auto &l : g.links)
    for (const auto &p : l) ++multiplicity[p];
  LinkCount c{static_cast<int>(g.links.size()), 0};
  for (const auto &[pin, k] : multiplicity) c.joints += std::max(0, k - 1);
  return c;
}

inline int mobility(const LinkGraph &g) {
  const auto c = count_links_joints(g);
  return gruebler(c.links, c.joints);
}

/// Bars come from distance constraints; bars sharing two pins or closing a
/// triangle are merged into one rigid link.
inline LinkGraph extract_link_graph(const Linkage &lk) {
  std::vector<std::set<std::string>> bodies;
  std::set<std::string> ground;
  for (const auto &j : lk.joints)
    if (j.is_fixed()) ground.insert(j.id);
  if (!ground.empty()) bodies.push_back(ground);
  for (const auto &j : lk.joints)
    for (const auto &p : j.parents()) bodies.push_back({p, j.id});

  auto shared = [](const std::set<std::string> &a, const std::set<std::string> &b) {
    std::vector<std::string> s;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(s));
    return s;
  };
  auto merge = [&](std::vector<std::size_t> idx) {
    std::sort(idx.begin(), idx.end());
    for (std::size_t k = 1; k < idx.size(); ++k) bodies[idx[0]].insert(bodies[idx[k]].begin(), bodies[idx[k]].end());
    for (std::size_t k = idx.size(); k-- > 1;) bodies.erase(bodies.begin() + static_cast<std::ptrdiff_t>(idx[k]));
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t a = 0; a < bodies.size() && !changed; ++a)
      for (std::size_t b = a + 1; b < bodies.size() && !changed; ++b)
        if (shared(bodies[a], bodies[b]).size() >= 2) {
          merge({a, b});
          changed = true;
        }
    if (changed) continue;
    for (std::size_t a = 0; a < bodies.size() && !changed; ++a)
      for (std::size_t b = a + 1; b < bodies.size() && !changed; ++b) {
        const auto ab = shared(bodies[a], bodies[b]);
        if (ab.size() != 1) continue;
        for (std::size_t c = b + 1; c < bodies.size() && !changed; ++c) {
          const auto bc = shared(bodies[b], bodies[c]);
          const auto ca = shared(bodies[c], bodies[a]);
          if (bc.size() == 1 && ca.size() == 1 && ab[0] != bc[0] && bc[0] != ca[0] && ca[0] != ab[0]) {
            merge({a, b, c});
            changed = true;
          }
        }
      }
  }
  return {std::move(bodies)};
}

/// Gruebler mobility of the linkage's joint graph. Throws std::invalid_argument
/// when the graph is structurally broken (unknown references, cycles, ...).
/// Proposals with several cranks are still counted; validate() rejects them.
inline int dof(const Linkage &lk) {
  const auto diags = structural_diagnostics(lk);
  if (!diags.empty()) throw std::invalid_argument("dof() on invalid linkage: " + diags.front().to_string());
  return mobility(extract_link_graph(lk));
}

// ---------------------------------------------------------------------------
// Position solving

/// Zero, one or two circle intersections, Positive branch first.
struct CircleIntersection {
  std::array<Vec2, 2> points{};
  int count = 0;

  bool empty() const { return count == 0; }
  std::span<const Vec2> view() const { return {points.data(), static_cast<std::size_t>(count)}; }
};

inline CircleIntersection circle_intersection(const Vec2 &c0, double r0, const Vec2 &c1, double r1) {
  if (!(r0 > 0.0) || !(r1 > 0.0)) throw std::invalid_argument("circle_intersection: radii must be > 0");
  CircleIntersection out;
  const Vec2 d = c1 - c0;
  const double dist = norm(d);
  const double tol = 1e-9 * std::max(r0, r1);
  if (dist <= tol) return out;  // concentric
  if (dist > r0 + r1 + tol || dist < std::abs(r0 - r1) - tol) return out;

  const Vec2 u = d / dist;
  const Vec2 n{-u.y, u.x};  // left normal: positive cross product side
  const double a = (r0 * r0 - r1 * r1 + dist * dist) / (2.0 * dist);
  const Vec2 base = c0 + u * a;
  if (std::abs(dist - (r0 + r1)) <= tol || std::abs(dist - std::abs(r0 - r1)) <= tol) {
    out.points[0] = base;
    out.count = 1;
    return out;
  }
  const double h = std::sqrt(std::max(0.0, r0 * r0 - a * a));
  out.points[0] = base + n * h;
  out.points[1] = base - n * h;
  out.count = 2;
  return out;
}

/// Solved joint positions for one crank phase, or the first failure.
struct PoseResult {
  std::vector<Vec2> positions;  // indexed like Linkage::joints
  std::optional<Diagnostic> failure;
};

/// Solves every joint at crank phase offset `phase` (radians added to each
/// crank's initial angle). Requires parents to precede children; tolerates
/// several cranks so that invalid proposals can still be measured.
inline PoseResult solve_pose(const Linkage &lk, double phase, int step = 0) {
  PoseResult res;
  res.positions.resize(lk.joints.size());
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < lk.joints.size(); ++i) {
    const auto &j = lk.joints[i];
    auto at = [&](const std::string &id) -> const Vec2 * {
      auto it = idx.find(id);
      return it == idx.end() ? nullptr : &res.positions[it->second];
    };
    if (const auto *f = std::get_if<FixedJoint>(&j.kind)) {
      res.positions[i] = {f->x, f->y};
    } else if (const auto *c = std::get_if<CrankJoint>(&j.kind)) {
      const Vec2 *a = at(c->anchor);
      if (!a) {
        res.failure = Diagnostic{j.id, "order", "anchor '" + c->anchor + "' not solved before crank", step};
        return res;
      }
      const double th = c->initial_angle + phase;
      res.positions[i] = *a + Vec2{std::cos(th), std::sin(th)} * c->radius;
    } else {
      const auto &r = std::get<RevoluteJoint>(j.kind);
      const Vec2 *p0 = at(r.parent0);
      const Vec2 *p1 = at(r.parent1);
      if (!p0 || !p1) {
        res.failure = Diagnostic{j.id, "order", "parents not solved before revolute joint", step};
        return res;
      }
      if (r.parent0 == r.parent1 || !(r.dist0 > 0.0) || !(r.dist1 > 0.0)) {
        res.failure = Diagnostic{j.id, "degenerate", "revolute joint is not well defined", step};
        return res;
      }
      const auto hits = circle_intersection(*p0, r.dist0, *p1, r.dist1);
      if (hits.empty()) {
        const double d = distance(*p0, *p1);
        std::ostringstream os;
        if (d > r.dist0 + r.dist1)
          os << "distance between its anchor points (" << r.parent0 << " and " << r.parent1 << ") " << d
             << " exceeds the sum of its radii " << (r.dist0 + r.dist1);
        else
          os << "distance between its anchor points (" << r.parent0 << " and " << r.parent1 << ") " << d
             << " is below the radius difference " << std::abs(r.dist0 - r.dist1);
        res.failure = Diagnostic{j.id, "infeasible", os.str(), step};
        return res;
      }
      res.positions[i] = (hits.count == 1 || r.branch == Branch::Positive) ? hits.points[0] : hits.points[1];
    }
    idx.emplace(j.id, i);
  }
  return res;
}

struct SimulationResult {
  std::map<std::string, Trajectory> per_joint;
  bool buildable = false;
  std::vector<Diagnostic> diagnostics;
  int dof = 0;

  const Trajectory &trajectory(const std::string &id) const { return per_joint.at(id); }
  friend bool operator==(const SimulationResult &, const SimulationResult &) = default;
};

inline constexpr int kDefaultSteps = 100;

/// Samples n_steps crank phases uniformly over [0, 2pi) plus a closing sample
/// at 2pi, so every trajectory has n_steps + 1 points.
inline SimulationResult simulate(const Linkage &lk, int n_steps = kDefaultSteps) {
  if (n_steps < 1) throw std::invalid_argument("simulate: n_steps must be positive");
  const auto diags = validate(lk);
  if (!diags.empty()) throw std::invalid_argument("simulate() on invalid linkage: " + diags.front().to_string());

  SimulationResult out;
  out.dof = dof(lk);
  std::vector<PointSet> tracks(lk.joints.size());
  for (auto &t : tracks) t.reserve(static_cast<std::size_t>(n_steps) + 1);
  for (int k = 0; k <= n_steps; ++k) {
    const double phase = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_steps);
    auto pose = solve_pose(lk, phase, k);
    if (pose.failure) {
      out.buildable = false;
      out.diagnostics.push_back(*pose.failure);
      return out;
    }
    for (std::size_t i = 0; i < tracks.size(); ++i) tracks[i].push_back(pose.positions[i]);
  }
  out.buildable = true;
  const double dt = 1.0 / static_cast<double>(n_steps);
  for (std::size_t i = 0; i < tracks.size(); ++i)
    out.per_joint.emplace(lk.joints[i].id, Trajectory{std::move(tracks[i]), dt});
  return out;
}

/// Candidate counts as semantically successful iff it parsed and simulated.
inline bool semantic_success(bool parse_ok, const SimulationResult &result) {
  return parse_ok && result.buildable;
}

}  // namespace linksynth
