#pragma once

// Shared test fixtures: hand-built linkages and independent reference math.

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "linksynth/lifting/events.hpp"
#include "linksynth/linkage.hpp"

namespace fixtures {

using namespace linksynth;

/// Crank-rocker: ground 4, crank 1, coupler 3.5, rocker 3 (1 + 4 <= 3.5 + 3).
/// E is a coupler point on the B-C side.
inline Linkage grashof_four_bar() {
  Linkage lk;
  lk.name = "grashof";
  lk.joints = {make_fixed("A", 0, 0), make_crank("B", "A", 1.0, 0.3), make_fixed("D", 4, 0),
               make_revolute("C", "B", "D", 3.5, 3.0), make_revolute("E", "B", "C", 2.0, 2.5)};
  lk.target = "E";
  return lk;
}

/// Single six-bar loop A-B-C-D-E-F closed by ground, driven by three cranks:
/// six links, six pins, mobility 3.
inline Linkage hexagon_three_cranks() {
  Linkage lk;
  lk.name = "hexagon";
  lk.joints = {make_fixed("A", 0, 0),        make_fixed("F", 4, 0),          make_crank("B", "A", 1.0, 1.2),
               make_crank("C", "B", 1.5, 0.4), make_crank("E", "F", 1.0, 1.9), make_revolute("D", "C", "E", 2.0, 2.0)};
  lk.target = "D";
  return lk;
}

/// Watt chain: ground ternary {A, D, G}, rocker ternary {C, D, E}.
/// Six links, seven pins, mobility 1.
inline Linkage watt_six_bar() {
  Linkage lk;
  lk.name = "watt";
  lk.joints = {make_fixed("A", 0, 0),
               make_crank("B", "A", 1.0),
               make_fixed("D", 4, 0),
               make_revolute("C", "B", "D", 3.5, 3.0),
               make_revolute("E", "C", "D", 2.0, 2.5),
               make_fixed("G", 7, 1),
               make_revolute("F", "E", "G", 3.0, 3.0)};
  lk.target = "F";
  return lk;
}

/// Oracle: the positive-branch circle intersection by the law of cosines,
/// written independently of the library's solver.
inline Vec2 law_of_cosines_point(Vec2 p0, double r0, Vec2 p1, double r1) {
  const double dx = p1.x - p0.x, dy = p1.y - p0.y;
  const double e = std::hypot(dx, dy);
  const double phi = std::atan2(dy, dx);
  const double alpha = std::acos((r0 * r0 + e * e - r1 * r1) / (2.0 * r0 * e));
  return {p0.x + r0 * std::cos(phi + alpha), p0.y + r0 * std::sin(phi + alpha)};
}

/// Oracle positions of the Grashof four-bar at crank phase `phase`.
struct FourBarPose {
  Vec2 A, B, D, C, E;
};
inline FourBarPose grashof_oracle(double phase) {
  FourBarPose p;
  p.A = {0, 0};
  p.D = {4, 0};
  p.B = {std::cos(0.3 + phase), std::sin(0.3 + phase)};
  p.C = law_of_cosines_point(p.B, 3.5, p.D, 3.0);
  p.E = law_of_cosines_point(p.B, 2.0, p.C, 2.5);
  return p;
}

inline double brute_chamfer(const std::vector<Vec2> &a, const std::vector<Vec2> &b) {
  auto one_way = [](const std::vector<Vec2> &x, const std::vector<Vec2> &y) {
    double s = 0.0;
    for (const auto &p : x) {
      double best = INFINITY;
      for (const auto &q : y) {
        const double dx = p.x - q.x, dy = p.y - q.y;
        best = std::min(best, std::sqrt(dx * dx + dy * dy));
      }
      s += best;
    }
    return s / static_cast<double>(x.size());
  };
  return 0.5 * (one_way(a, b) + one_way(b, a));
}

inline std::vector<Vec2> random_cloud(std::mt19937_64 &rng, std::size_t n, double lo = -5.0, double hi = 5.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<Vec2> out(n);
  for (auto &p : out) p = {u(rng), u(rng)};
  return out;
}

/// Closed curve sum_k (a_k cos kt + b_k sin kt) over k = 1..harmonics,
/// sampled with n steps and a closing sample.
inline Trajectory random_smooth_curve(std::mt19937_64 &rng, std::size_t n, int harmonics = 3) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<std::array<double, 4>> c(static_cast<std::size_t>(harmonics));
  for (int k = 0; k < harmonics; ++k) {
    const double w = 4.0 / (k + 1);
    c[static_cast<std::size_t>(k)] = {w * u(rng), w * u(rng), w * u(rng), w * u(rng)};
  }
  Trajectory t;
  for (std::size_t i = 0; i <= n; ++i) {
    const double th = 2.0 * std::numbers::pi * static_cast<double>(i % n) / static_cast<double>(n);
    Vec2 p{5, 5};
    for (int k = 0; k < harmonics; ++k) {
      const auto &q = c[static_cast<std::size_t>(k)];
      p.x += q[0] * std::cos((k + 1) * th) + q[1] * std::sin((k + 1) * th);
      p.y += q[2] * std::cos((k + 1) * th) + q[3] * std::sin((k + 1) * th);
    }
    t.samples.push_back(p);
  }
  t.dt = 1.0 / static_cast<double>(n);
  return t;
}

/// Two tangent unit arcs: left-turning for s in [-1, 0], right-turning for
/// s in [0, 1]; the curvature flips sign at the origin.
inline Trajectory s_curve(std::size_t half = 100) {
  Trajectory t;
  for (std::size_t i = 0; i <= 2 * half; ++i) {
    const double s = -1.0 + static_cast<double>(i) / static_cast<double>(half);
    t.samples.push_back(s <= 0 ? Vec2{std::sin(s), 1 - std::cos(s)} : Vec2{std::sin(s), -1 + std::cos(s)});
  }
  t.dt = 1.0 / static_cast<double>(2 * half);
  return t;
}

/// Precondition of the robustness property: a position perturbation of at
/// most `delta` per coordinate moves every thresholded signal by less than
/// its distance to the threshold, and keeps every geometric predicate
/// (region edges, guard side, segment intersection parameters) strictly
/// decided. The bound on curvature comes from interval arithmetic on the
/// centred stencils.
inline bool perturbation_is_sub_margin(const Trajectory &tr, double delta, const lifting::LiftingConfig &cfg,
                                       const std::vector<lifting::Region> &regions,
                                       const std::vector<lifting::Guard> &guards) {
  const auto k = lifting::proxies(tr, cfg.dt);
  const double ev = 2.0 * std::sqrt(2.0) * delta / cfg.dt;
  const double ea = 4.0 * std::sqrt(2.0) * delta / (cfg.dt * cfg.dt);
  const std::size_t n = tr.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 v = k.velocities[i];
    if (std::abs(std::abs(v.x) - cfg.monotonicity_margin) <= 2.0 * ev) return false;
    if (std::abs(std::abs(v.y) - cfg.monotonicity_margin) <= 2.0 * ev) return false;
    for (const auto &g : guards) {
      if (std::abs(g.signed_distance(tr.samples[i])) <= 4.0 * delta) return false;
      if (std::abs(std::abs(dot(v, g.unit_normal())) - cfg.guard_min_normal_velocity) <= 2.0 * ev) return false;
    }
    for (const auto &r : regions) {
      const auto &p = tr.samples[i];
      for (double d : {p.x - r.box.min.x, r.box.max.x - p.x, p.y - r.box.min.y, r.box.max.y - p.y})
        if (std::abs(d) <= 4.0 * delta) return false;
    }
    if (i == 0 || i + 1 == n) continue;
    const Vec2 a = k.accelerations[i];
    const double sp = norm(v);
    if (sp <= 2.0 * ev) return false;
    const double c = cross(v, a);
    const double ec = sp * ea + norm(a) * ev + ev * ea;
    const double lo = std::pow(sp - ev, 3.0), hi = std::pow(sp + ev, 3.0);
    if (lo < 10.0 * cfg.singular_speed) return false;
    const double kappa = k.curvatures[i];
    double bound = 0.0;
    for (double num : {c - ec, c + ec})
      for (double den : {lo, hi}) bound = std::max(bound, std::abs(num / den - kappa));
    if (std::abs(std::abs(kappa) - cfg.curvature_margin) <= 2.0 * bound) return false;
  }
  // Self-intersections must be transversal and away from segment ends.
  const auto &p = tr.samples;
  for (std::size_t a = 0; a + 1 < n; ++a)
    for (std::size_t b = a + 2; b + 1 < n; ++b) {
      const Vec2 r = p[a + 1] - p[a], s = p[b + 1] - p[b];
      const double d = cross(r, s);
      if (std::abs(d) < 1e-6) continue;
      const double u = cross(p[b] - p[a], s) / d, w = cross(p[b] - p[a], r) / d;
      const double tu = 1e3 * delta / norm(r), tw = 1e3 * delta / norm(s);
      const bool near_u = u > -tu && u < 1 + tu, near_w = w > -tw && w < 1 + tw;
      const bool inside_u = u > tu && u < 1 - tu, inside_w = w > tw && w < 1 - tw;
      if (near_u && near_w && !(inside_u && inside_w)) {
        // a hit sitting on a shared closing vertex is structural, not marginal
        const bool seam = a == 0 && b + 2 == n;
        if (!seam) return false;
      }
    }
  return true;
}

}  // namespace fixtures
