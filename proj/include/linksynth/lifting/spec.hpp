#pragma once

// Temporal specification synthesised from a target curve.

#include <algorithm>
#include <vector>

#include "linksynth/lifting/temporal.hpp"
#include "linksynth/metrics.hpp"

namespace linksynth::lifting {

/// R_in: the target's bounding box padded by `padding` times its diagonal.
inline Region containment_region(const Trajectory &target, double padding = 0.05) {
  auto bb = bounding_box(target.samples);
  const double pad = padding * bb.diagonal();
  bb.min -= Vec2{pad, pad};
  bb.max += Vec2{pad, pad};
  return {"R_in", bb};
}

/// L_0: the major principal axis through the target's centroid.
inline Guard principal_guard(const Trajectory &target) {
  const double th = linksynth::detail::principal_angle(target.samples);
  return {"L_0", centroid(target.samples), {std::cos(th), std::sin(th)}};
}

struct Interval {
  double a, b;
};

/// Sorts and fuses intervals that overlap or sit within `tol` of each other.
inline std::vector<Interval> merge_intervals(std::vector<Interval> v, double tol) {
  std::sort(v.begin(), v.end(), [](const Interval &x, const Interval &y) { return x.a < y.a; });
  std::vector<Interval> out;
  for (const auto &iv : v) {
    if (!out.empty() && iv.a <= out.back().b + tol) out.back().b = std::max(out.back().b, iv.b);
    else out.push_back(iv);
  }
  return out;
}

/// Conjunction of
///   G[a,b](in(R)) over each maximal run where the target stays inside R,
///   F-windows over inflection / extremum events (one F[0,1] when there are
///     at most `sparse_event_limit` of them, otherwise one window of
///     half-sample padding per event, merged),
///   (not cross(g) U[0,1] in(R_in)) for every guard g.
/// Empty `regions` / `guards` fall back to R_in and L_0.
inline Formula synthesize_spec(const Trajectory &target, std::vector<Region> regions, std::vector<Guard> guards,
                               const LiftingConfig &cfg = {}) {
  check_trajectory(target, 3);
  if (regions.empty()) regions.push_back(containment_region(target, cfg.region_padding));
  if (guards.empty()) guards.push_back(principal_guard(target));
  const std::size_t n = target.size() - 1;
  const double nd = static_cast<double>(n);
  std::vector<Formula> conj;

  for (const auto &r : regions) {
    std::vector<Interval> runs;
    for (std::size_t i = 0; i <= n;) {
      if (!r.box.contains(target.samples[i])) {
        ++i;
        continue;
      }
      std::size_t j = i;
      while (j + 1 <= n && r.box.contains(target.samples[j + 1])) ++j;
      runs.push_back({static_cast<double>(i) / nd, static_cast<double>(j) / nd});
      i = j + 1;
    }
    for (const auto &iv : merge_intervals(runs, cfg.merge_tolerance))
      conj.push_back(Formula::always(iv.a, iv.b, Formula::in(r.name)));
  }

  const auto k = proxies(target, cfg.dt, cfg.singular_speed);
  std::vector<Interval> windows;
  for (const auto &e : detect_events(target, k, {}, {}, cfg))
    if (e.kind == EventKind::INF || e.kind == EventKind::EX_x || e.kind == EventKind::EX_y) {
      const double h = 0.5 / nd;
      windows.push_back({std::max(0.0, e.t - h), std::min(1.0, e.t + h)});
    }
  auto shape_events = [] {
    return Formula::any_of(
        {Formula::event(AtomKind::INF), Formula::event(AtomKind::EX_x), Formula::event(AtomKind::EX_y)});
  };
  if (!windows.empty() && windows.size() <= cfg.sparse_event_limit) {
    conj.push_back(Formula::eventually(0.0, 1.0, shape_events()));
  } else {
    for (const auto &iv : merge_intervals(windows, cfg.merge_tolerance))
      conj.push_back(Formula::eventually(iv.a, iv.b, shape_events()));
  }

  for (const auto &g : guards)
    conj.push_back(Formula::until(0.0, 1.0, Formula::negate(Formula::cross(g.name)), Formula::in(regions.front().name)));
  return Formula::all_of(std::move(conj));
}

/// True when `spec` has a top-level G[0,1](in(region)) conjunct.
inline bool has_full_containment(const Formula &spec, const std::string &region) {
  const auto target = Formula::always(0.0, 1.0, Formula::in(region));
  if (spec == target) return true;
  if (spec.op != TemporalOp::And) return false;
  return std::any_of(spec.args.begin(), spec.args.end(), [&](const Formula &c) { return c == target; });
}

}  // namespace linksynth::lifting
